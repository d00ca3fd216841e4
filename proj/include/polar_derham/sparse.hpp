// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <initializer_list>
#include <vector>

namespace polar_derham
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using IntSparseMatrix = Eigen::SparseMatrix<int, Eigen::RowMajor>;

template <typename T>
using SparseRM = Eigen::SparseMatrix<T, Eigen::RowMajor>;

template <typename T>
SparseRM<T> identity(int n)
{
  SparseRM<T> I(n, n);
  I.setIdentity();
  return I;
}

template <typename T>
SparseRM<T> zeros(int rows, int cols)
{
  return SparseRM<T>(rows, cols);
}

/// Kronecker product A ⊗ B.
template <typename T>
SparseRM<T> kron(const SparseRM<T>& A, const SparseRM<T>& B)
{
  std::vector<Eigen::Triplet<T>> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
  for (int i = 0; i < A.outerSize(); ++i)
    for (typename SparseRM<T>::InnerIterator a(A, i); a; ++a)
      for (int k = 0; k < B.outerSize(); ++k)
        for (typename SparseRM<T>::InnerIterator b(B, k); b; ++b)
          trip.emplace_back(a.row() * B.rows() + b.row(),
                            a.col() * B.cols() + b.col(), a.value() * b.value());
  SparseRM<T> K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

/// Vertical concatenation; all blocks must share a column count.
template <typename T>
SparseRM<T> vstack(std::initializer_list<SparseRM<T>> blocks)
{
  std::vector<Eigen::Triplet<T>> trip;
  int rows = 0;
  int cols = blocks.size() ? blocks.begin()->cols() : 0;
  for (const auto& M : blocks)
  {
    if (M.cols() != cols)
      throw std::invalid_argument("vstack: column counts differ");
    for (int i = 0; i < M.outerSize(); ++i)
      for (typename SparseRM<T>::InnerIterator it(M, i); it; ++it)
        trip.emplace_back(rows + it.row(), it.col(), it.value());
    rows += M.rows();
  }
  SparseRM<T> S(rows, cols);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

/// Horizontal concatenation; all blocks must share a row count.
template <typename T>
SparseRM<T> hstack(std::initializer_list<SparseRM<T>> blocks)
{
  std::vector<Eigen::Triplet<T>> trip;
  int cols = 0;
  int rows = blocks.size() ? blocks.begin()->rows() : 0;
  for (const auto& M : blocks)
  {
    if (M.rows() != rows)
      throw std::invalid_argument("hstack: row counts differ");
    for (int i = 0; i < M.outerSize(); ++i)
      for (typename SparseRM<T>::InnerIterator it(M, i); it; ++it)
        trip.emplace_back(it.row(), cols + it.col(), it.value());
    cols += M.cols();
  }
  SparseRM<T> S(rows, cols);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

/// Largest absolute entry (0 for an empty matrix).
template <typename T>
T max_abs(const SparseRM<T>& M)
{
  T m = 0;
  for (int i = 0; i < M.outerSize(); ++i)
    for (typename SparseRM<T>::InnerIterator it(M, i); it; ++it)
      m = std::max<T>(m, it.value() < 0 ? -it.value() : it.value());
  return m;
}

inline SparseMatrix to_double(const IntSparseMatrix& M)
{
  return M.cast<double>();
}

/// Number of rows with at least one stored nonzero.
int nonzero_row_count(const SparseMatrix& M);

/// Numerical rank by dense SVD with the threshold
/// max(rows, cols) * eps * sigma_max.
int dense_rank(const SparseMatrix& M);

/// Remove explicitly stored zeros.
SparseMatrix pruned(const SparseMatrix& M);

} // namespace polar_derham
