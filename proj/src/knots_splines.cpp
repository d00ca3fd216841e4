// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/knots_splines.hpp"
#include "polar_derham/errors.hpp"
#include <algorithm>
#include <cmath>
#include <sstream>

namespace polar_derham
{

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : _p(degree), _t(std::move(knots))
{
  if (_p < 0)
    throw std::invalid_argument("knot vector degree must be non-negative");
  if (static_cast<int>(_t.size()) < 2 * (_p + 1))
    throw std::invalid_argument("knot vector too short: need n >= p+1");
  for (std::size_t i = 1; i < _t.size(); ++i)
    if (_t[i] < _t[i - 1])
      throw std::invalid_argument("knots must be non-decreasing");
  for (int i = 1; i <= _p; ++i)
  {
    if (_t[i] != _t[0] || _t[_t.size() - 1 - i] != _t.back())
      throw std::invalid_argument("knot vector is not open");
  }
  if (!(_t.front() < _t.back()))
    throw std::invalid_argument("knot vector spans an empty interval");
  if (multiplicity(_t.front()) > _p + 1 || multiplicity(_t.back()) > _p + 1)
    throw std::invalid_argument("boundary knot multiplicity exceeds p+1");
}

int KnotVector::multiplicity(double x) const
{
  return static_cast<int>(std::count(_t.begin(), _t.end(), x));
}

int KnotVector::smoothness() const
{
  int k = _p;
  const double a = _t.front(), b = _t.back();
  for (std::size_t i = 0; i < _t.size();)
  {
    std::size_t j = i;
    while (j < _t.size() && _t[j] == _t[i])
      ++j;
    if (_t[i] != a && _t[i] != b)
      k = std::min(k, _p - static_cast<int>(j - i));
    i = j;
  }
  return k;
}

int KnotVector::find_span(double x) const
{
  const int n = size();
  if (x < front() || x > back())
    throw std::domain_error("parameter outside the knot interval");
  auto it = std::upper_bound(_t.begin(), _t.end(), x);
  int mu = static_cast<int>(it - _t.begin()) - 1;
  return std::clamp(mu, _p, n - 1);
}

Eigen::VectorXd KnotVector::span_values(int mu, double x) const
{
  Eigen::VectorXd N = Eigen::VectorXd::Zero(_p + 1);
  std::vector<double> left(_p + 1), right(_p + 1);
  N(0) = 1.0;
  for (int j = 1; j <= _p; ++j)
  {
    left[j] = x - _t[mu + 1 - j];
    right[j] = _t[mu + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r)
    {
      const double tmp = N(r) / (right[r + 1] + left[j - r]);
      N(r) = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    N(j) = saved;
  }
  return N;
}

Eigen::VectorXd KnotVector::eval(double x) const
{
  const int mu = find_span(x);
  Eigen::VectorXd B = Eigen::VectorXd::Zero(size());
  B.segment(mu - _p, _p + 1) = span_values(mu, x);
  return B;
}

std::vector<double> KnotVector::greville() const
{
  const int n = size();
  std::vector<double> xi(n);
  for (int j = 0; j < n; ++j)
  {
    if (_p == 0)
    {
      xi[j] = 0.5 * (_t[j] + _t[j + 1]);
      continue;
    }
    double s = 0;
    for (int m = 1; m <= _p; ++m)
      s += _t[j + m];
    xi[j] = s / _p;
  }
  return xi;
}

KnotVector KnotVector::interior() const
{
  if (_p == 0)
    throw std::invalid_argument("degree-0 space has no derivative basis");
  return KnotVector(_p - 1, std::vector<double>(_t.begin() + 1, _t.end() - 1));
}

KnotVector make_uniform_open_knots(int p, int num_distinct, double a, double b)
{
  if (p < 0)
    throw std::invalid_argument("degree must be non-negative");
  if (num_distinct < 2)
    throw std::invalid_argument("need at least two distinct knots");
  if (!(a < b))
    throw std::invalid_argument("interval must satisfy a < b");
  std::vector<double> t;
  t.reserve(num_distinct + 2 * p);
  for (int i = 0; i < p; ++i)
    t.push_back(a);
  const double h = (b - a) / (num_distinct - 1);
  for (int i = 0; i < num_distinct; ++i)
    t.push_back(i + 1 == num_distinct ? b : a + i * h);
  for (int i = 0; i < p; ++i)
    t.push_back(b);
  return KnotVector(p, std::move(t));
}

IntSparseMatrix difference_matrix(int n, bool periodic)
{
  if (n < 2)
    throw std::invalid_argument("difference matrix needs n >= 2");
  const int rows = periodic ? n : n - 1;
  std::vector<Eigen::Triplet<int>> trip;
  for (int i = 0; i < n - 1; ++i)
  {
    trip.emplace_back(i, i, -1);
    trip.emplace_back(i, i + 1, 1);
  }
  if (periodic)
  {
    trip.emplace_back(n - 1, 0, 1);
    trip.emplace_back(n - 1, n - 1, -1);
  }
  IntSparseMatrix D(rows, n);
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

namespace
{
void check_periodic(const KnotVector& kv)
{
  if (kv.size() < 4)
    throw ConstructionError("periodic extraction needs n >= 4 basis functions");
  if (kv.smoothness() < 1)
    throw ConstructionError("periodic extraction needs a C1 spline space");
}

std::pair<double, double> periodic_weights(const KnotVector& kv)
{
  const int n = kv.size(), p = kv.degree();
  const double right = kv.knot(n + p + 1) - kv.knot(n);
  const double left = kv.knot(p + 2) - kv.knot(1);
  return {right / (right + left), left / (right + left)};
}
} // namespace

SparseMatrix periodic_H0(const KnotVector& kv)
{
  check_periodic(kv);
  const int n = kv.size();
  const auto [c1, c2] = periodic_weights(kv);
  std::vector<Eigen::Triplet<double>> trip;
  trip.emplace_back(0, 0, c1);
  trip.emplace_back(n - 3, 0, c2);
  for (int i = 0; i < n - 2; ++i)
    trip.emplace_back(i, i + 1, 1.0);
  trip.emplace_back(0, n - 1, c1);
  trip.emplace_back(n - 3, n - 1, c2);
  SparseMatrix H(n - 2, n);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

SparseMatrix periodic_H1(const KnotVector& kv)
{
  check_periodic(kv);
  const int n = kv.size();
  const auto [c1, c2] = periodic_weights(kv);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n - 3; ++i)
    trip.emplace_back(i, i + 1, 1.0);
  trip.emplace_back(n - 3, 0, c2);
  trip.emplace_back(n - 3, n - 2, c1);
  SparseMatrix H(n - 2, n - 1);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

DerivativeBasis derivative_basis(const KnotVector& kv)
{
  DerivativeBasis d{kv.interior(), {}};
  const int n = kv.size(), p = kv.degree();
  d.scale.resize(n - 1);
  for (int j = 1; j <= n - 1; ++j)
  {
    const double h = kv.knot(j + p + 1) - kv.knot(j + 1);
    d.scale[j - 1] = h > 0 ? p / h : 0.0;
  }
  return d;
}

Eigen::VectorXd DerivativeBasis::eval(double x) const
{
  Eigen::VectorXd v = hat_kv.eval(x);
  for (int j = 0; j < v.size(); ++j)
    v(j) *= scale[j];
  return v;
}

SplineSpace::SplineSpace(KnotVector kv, bool periodic)
    : _kv(std::move(kv)), _periodic(periodic),
      _dbasis(_kv.degree() > 0 ? derivative_basis(_kv)
                               : DerivativeBasis{KnotVector(0, {_kv.front(), _kv.back()}), {0.0}})
{
  if (_periodic)
  {
    _H0 = periodic_H0(_kv);
    _H1 = periodic_H1(_kv);
    _diff = difference_matrix(_kv.size() - 2, true);
  }
  else if (_kv.size() >= 2)
    _diff = difference_matrix(_kv.size(), false);
}

const SparseMatrix& SplineSpace::H0() const
{
  if (!_periodic)
    throw std::logic_error("H0 requested for a non-periodic space");
  return _H0;
}

const SparseMatrix& SplineSpace::H1() const
{
  if (!_periodic)
    throw std::logic_error("H1 requested for a non-periodic space");
  return _H1;
}

double SplineSpace::reduce(double x) const
{
  if (!std::isfinite(x))
    throw std::domain_error("non-finite parameter");
  if (_periodic)
  {
    double y = std::fmod(x - a(), length());
    if (y < 0)
      y += length();
    return a() + y;
  }
  if (x < a() || x > b())
  {
    std::ostringstream msg;
    msg << "parameter " << x << " outside [" << a() << ", " << b() << "]";
    throw std::domain_error(msg.str());
  }
  return x;
}

Eigen::VectorXd SplineSpace::eval_basis(double x) const
{
  Eigen::VectorXd B = _kv.eval(reduce(x));
  if (_periodic)
    return _H0 * B;
  return B;
}

Eigen::VectorXd SplineSpace::eval_derivative_basis(double x) const
{
  if (degree() == 0)
    throw std::invalid_argument("degree-0 space has no derivative basis");
  Eigen::VectorXd D = _dbasis.eval(reduce(x));
  if (_periodic)
    return _H1 * D;
  return D;
}

Eigen::VectorXd SplineSpace::eval_basis_derivatives(double x) const
{
  return _diff.cast<double>().transpose() * eval_derivative_basis(x);
}

double SplineSpace::eval(const Eigen::VectorXd& coeffs, double x) const
{
  if (coeffs.size() != dim())
    throw std::invalid_argument("coefficient length does not match space dimension");
  return eval_basis(x).dot(coeffs);
}

double SplineSpace::eval_derivative(const Eigen::VectorXd& coeffs, double x) const
{
  if (coeffs.size() != dim())
    throw std::invalid_argument("coefficient length does not match space dimension");
  Eigen::VectorXd dc = _diff.cast<double>() * coeffs;
  return eval_derivative_basis(x).dot(dc);
}

std::vector<double> SplineSpace::greville() const
{
  auto xi = _kv.greville();
  if (!_periodic)
    return xi;
  return std::vector<double>(xi.begin() + 1, xi.end() - 1);
}

DtaDiagnostic is_dta_compatible(const SparseMatrix& M, double tol,
                                std::optional<int> max_row_support)
{
  DtaDiagnostic d;
  d.rank = dense_rank(M);
  const int full = static_cast<int>(std::min(M.rows(), M.cols()));
  if (d.rank < full)
  {
    std::ostringstream msg;
    msg << "rank deficient: rank " << d.rank << " < " << full;
    d.violations.push_back(msg.str());
  }
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(M.cols());
  d.min_entry = M.nonZeros() ? std::numeric_limits<double>::infinity() : 0.0;
  for (int i = 0; i < M.outerSize(); ++i)
  {
    int nnz = 0;
    for (SparseMatrix::InnerIterator it(M, i); it; ++it)
    {
      colsum(it.col()) += it.value();
      d.min_entry = std::min(d.min_entry, it.value());
      if (it.value() != 0.0)
        ++nnz;
    }
    d.max_row_nonzeros = std::max(d.max_row_nonzeros, nnz);
  }
  if (M.cols() > 0)
    d.max_column_sum_error = (colsum.array() - 1.0).abs().maxCoeff();
  if (d.max_column_sum_error > tol)
  {
    std::ostringstream msg;
    msg << "column sums deviate from 1 by " << d.max_column_sum_error;
    d.violations.push_back(msg.str());
  }
  if (d.min_entry < -tol)
  {
    std::ostringstream msg;
    msg << "negative entry " << d.min_entry;
    d.violations.push_back(msg.str());
  }
  if (max_row_support && d.max_row_nonzeros > *max_row_support)
  {
    std::ostringstream msg;
    msg << "row support " << d.max_row_nonzeros << " exceeds " << *max_row_support;
    d.violations.push_back(msg.str());
  }
  d.compatible = d.violations.empty();
  return d;
}

} // namespace polar_derham
