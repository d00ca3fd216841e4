// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sparse.hpp"
#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace polar_derham
{

/// Open knot vector t_1, ..., t_{n+p+1} for degree p.
class KnotVector
{
public:
  KnotVector(int degree, std::vector<double> knots);

  int degree() const { return _p; }
  /// Number of B-splines n.
  int size() const { return static_cast<int>(_t.size()) - _p - 1; }
  const std::vector<double>& knots() const { return _t; }
  /// 1-based knot access t_i.
  double knot(int i) const { return _t.at(i - 1); }
  double front() const { return _t.front(); }
  double back() const { return _t.back(); }

  /// Multiplicity of the knot value x (0 if absent).
  int multiplicity(double x) const;

  /// Minimal continuity p - m over interior knots; p if there are none.
  int smoothness() const;

  /// 0-based index mu with t[mu] <= x < t[mu+1], closed at the right end.
  int find_span(double x) const;

  /// Values of the p+1 B-splines nonzero on span mu at x.
  Eigen::VectorXd span_values(int mu, double x) const;

  /// All n B-spline values at x.
  Eigen::VectorXd eval(double x) const;

  /// Knot averages (t_{j+1} + ... + t_{j+p}) / p; knots themselves if p = 0.
  std::vector<double> greville() const;

  /// Degree p-1 knot vector t_2, ..., t_{n+p}.
  KnotVector interior() const;

private:
  int _p;
  std::vector<double> _t;
};

/// Uniform open knot vector with num_distinct values on [a, b].
KnotVector make_uniform_open_knots(int p, int num_distinct, double a, double b);

/// Bidiagonal -1/+1 difference stencil. Non-periodic: (n-1) x n.
/// Periodic: n x n with the extra row (1, 0, ..., 0, -1).
IntSparseMatrix difference_matrix(int n, bool periodic);

/// C1-periodic extraction [c | I | c], (n-2) x n.
SparseMatrix periodic_H0(const KnotVector& kv);

/// Extraction of the periodic derivative space, (n-2) x (n-1).
SparseMatrix periodic_H1(const KnotVector& kv);

/// D_j = p / (t_{j+p+1} - t_{j+1}) B_{j+1}^{p-1}, j = 1..n-1.
struct DerivativeBasis
{
  KnotVector hat_kv;
  std::vector<double> scale;

  Eigen::VectorXd eval(double x) const;
};

DerivativeBasis derivative_basis(const KnotVector& kv);

/// Univariate spline space, optionally restricted to its C1-periodic part.
class SplineSpace
{
public:
  SplineSpace(KnotVector kv, bool periodic);

  const KnotVector& knots() const { return _kv; }
  bool periodic() const { return _periodic; }
  int degree() const { return _kv.degree(); }
  int smoothness() const { return _kv.smoothness(); }
  int dim() const { return _periodic ? _kv.size() - 2 : _kv.size(); }
  /// Dimension of the derivative space: n-1, or n-2 when periodic.
  int derivative_dim() const { return _periodic ? _kv.size() - 2 : _kv.size() - 1; }
  double a() const { return _kv.front(); }
  double b() const { return _kv.back(); }
  double length() const { return b() - a(); }

  const SparseMatrix& H0() const;
  const SparseMatrix& H1() const;
  const DerivativeBasis& dbasis() const { return _dbasis; }

  /// Difference matrix mapping value coefficients to derivative coefficients.
  const IntSparseMatrix& difference() const { return _diff; }

  /// Parameter reduced into the interval; periodic spaces wrap,
  /// open spaces throw std::domain_error outside [a, b].
  double reduce(double x) const;

  Eigen::VectorXd eval_basis(double x) const;
  /// Basis of the derivative space at x (length derivative_dim()).
  Eigen::VectorXd eval_derivative_basis(double x) const;
  /// Derivatives of the dim() value basis functions at x.
  Eigen::VectorXd eval_basis_derivatives(double x) const;

  double eval(const Eigen::VectorXd& coeffs, double x) const;
  double eval_derivative(const Eigen::VectorXd& coeffs, double x) const;

  /// Greville abscissae of the value space; periodic function l uses
  /// the abscissa of raw function l+1.
  std::vector<double> greville() const;

private:
  KnotVector _kv;
  bool _periodic;
  DerivativeBasis _dbasis;
  IntSparseMatrix _diff;
  SparseMatrix _H0, _H1;
};

struct DtaDiagnostic
{
  bool compatible = true;
  int rank = 0;
  double max_column_sum_error = 0;
  double min_entry = 0;
  int max_row_nonzeros = 0;
  std::vector<std::string> violations;
};

/// Design-through-analysis check: full rank, column sums one,
/// non-negative entries and bounded row support.
DtaDiagnostic is_dta_compatible(const SparseMatrix& M, double tol = 1e-12,
                                std::optional<int> max_row_support = std::nullopt);

} // namespace polar_derham
