// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/sparse.hpp"
#include <Eigen/SVD>
#include <limits>

namespace polar_derham
{

int nonzero_row_count(const SparseMatrix& M)
{
  int count = 0;
  for (int i = 0; i < M.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(M, i); it; ++it)
      if (it.value() != 0.0)
      {
        ++count;
        break;
      }
  return count;
}

int dense_rank(const SparseMatrix& M)
{
  if (M.rows() == 0 || M.cols() == 0)
    return 0;
  Eigen::MatrixXd A(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return 0;
  const double tau = std::max(M.rows(), M.cols())
                     * std::numeric_limits<double>::epsilon() * s(0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau)
      ++r;
  return r;
}

SparseMatrix pruned(const SparseMatrix& M)
{
  SparseMatrix P = M;
  P.prune(0.0, 0.0);
  return P;
}

} // namespace polar_derham
