// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/polar_extraction.hpp"
#include "polar_derham/errors.hpp"
#include <cmath>
#include <numbers>
#include <sstream>

namespace polar_derham
{

std::vector<double> ring_angles(int n)
{
  constexpr double pi = std::numbers::pi;
  std::vector<double> a(n);
  for (int i = 1; i <= n; ++i)
  {
    double th = std::fmod(2 * pi + (1 - 2 * i) * pi / n, 2 * pi);
    if (th < 0)
      th += 2 * pi;
    a[i - 1] = th;
  }
  return a;
}

EbarBlock::EbarBlock(int nr) : _nr(nr)
{
  if (nr < 3)
    throw ConstructionError("the Ebar block needs nr >= 3");
  _theta = ring_angles(nr);
  _E.resize(3, 2 * nr);
  const double r3 = std::sqrt(3.0);
  for (int i = 0; i < nr; ++i)
  {
    const double c = std::cos(_theta[i]), s = std::sin(_theta[i]);
    _E.col(i).setConstant(1.0 / 3.0);
    _E(0, nr + i) = 1.0 / 3.0 + c / 3.0;
    _E(1, nr + i) = 1.0 / 3.0 - c / 6.0 + r3 / 6.0 * s;
    _E(2, nr + i) = 1.0 / 3.0 - c / 6.0 - r3 / 6.0 * s;
  }
}

double EbarBlock::operator()(int l, int i, int ring) const
{
  if (l < 1 || l > 3 || ring < 1 || ring > 2)
    throw std::out_of_range("Ebar index out of range");
  return _E(l - 1, (ring - 1) * _nr + wrap(i, _nr) - 1);
}

EbarBlock EbarBlock::perturbed(int l, int i, int ring, double delta) const
{
  EbarBlock b = *this;
  b._E(l - 1, (ring - 1) * _nr + wrap(i, _nr) - 1) += delta;
  return b;
}

EbarBlock ebar_block(int nr) { return EbarBlock(nr); }

PolarCounts polar_counts(int nr, int ns, int nt)
{
  PolarCounts c{};
  c.nbar0 = nr * (ns - 2) + 3;
  c.nbar1 = 2 * (c.nbar0 - 2);
  c.nbar2 = c.nbar0 - 3;
  c.n0 = nt * c.nbar0;
  c.n1 = nt * (c.nbar0 + c.nbar1);
  c.n2 = nt * (c.nbar1 + c.nbar2);
  c.n3 = nt * c.nbar2;
  return c;
}

void check_polar_sizes(int nr, int ns, int nt)
{
  std::ostringstream msg;
  if (nr < 3)
    msg << "n^r = " << nr << " below floor 3; ";
  if (ns < 4)
    msg << "n^s = " << ns << " below floor 4; ";
  if (nt < 3)
    msg << "n^t = " << nt << " below floor 3; ";
  if (!msg.str().empty())
    throw ConstructionError("size floor violated: " + msg.str());
}

SparseMatrix extraction_E0(const EbarBlock& ebar, int ns)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns);
  const auto c = polar_counts(nr, ns, 1);
  std::vector<Eigen::Triplet<double>> trip;
  for (int l = 0; l < 3; ++l)
    for (int col = 0; col < 2 * nr; ++col)
      trip.emplace_back(l, col, ebar.matrix()(l, col));
  for (int m = 0; m < nr * (ns - 2); ++m)
    trip.emplace_back(3 + m, 2 * nr + m, 1.0);
  SparseMatrix E(c.nbar0, nr * ns);
  E.setFromTriplets(trip.begin(), trip.end());
  return E;
}

Eigen::VectorXd apply_E10(const EbarBlock& ebar, int ns, const Eigen::VectorXd& x)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns);
  if (x.size() != nr * ns)
    throw std::invalid_argument("E10 input length must be nr*ns");
  const auto c = polar_counts(nr, ns, 1);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(c.nbar1);
  auto X = [&](int m) { return x(m - 1); };
  auto Y = [&](int m) -> double& { return y(m - 1); };
  for (int l = 1; l <= 2; ++l)
  {
    double v = 0;
    for (int i = 1; i <= nr; ++i)
      v += (ebar(l + 1, i + 1, 2) - ebar(l + 1, i, 2)) * X(i + nr);
    Y(l) = v;
  }
  for (int j = 3; j <= ns; ++j)
    for (int i = 1; i <= nr; ++i)
    {
      Y(2 + i + (2 * j - 6) * nr) = 0.0;
      Y(2 + i + (2 * j - 5) * nr) = X(i + (j - 1) * nr);
    }
  return y;
}

Eigen::VectorXd apply_E01(const EbarBlock& ebar, int ns, const Eigen::VectorXd& x)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns);
  if (x.size() != nr * (ns - 1))
    throw std::invalid_argument("E01 input length must be nr*(ns-1)");
  const auto c = polar_counts(nr, ns, 1);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(c.nbar1);
  auto X = [&](int m) { return x(m - 1); };
  auto Y = [&](int m) -> double& { return y(m - 1); };
  for (int l = 1; l <= 2; ++l)
  {
    double v = 0;
    for (int i = 1; i <= nr; ++i)
      v += (ebar(l + 1, i, 2) - ebar(l + 1, i, 1)) * X(i);
    Y(l) = v;
  }
  for (int j = 2; j <= ns - 1; ++j)
    for (int i = 1; i <= nr; ++i)
    {
      Y(2 + i + (2 * j - 4) * nr) = X(i + (j - 1) * nr);
      Y(2 + i + (2 * j - 3) * nr) = 0.0;
    }
  return y;
}

namespace
{
template <typename Action>
SparseMatrix materialize(int rows, int cols, Action&& act)
{
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(cols);
  for (int col = 0; col < cols; ++col)
  {
    e(col) = 1.0;
    Eigen::VectorXd y = act(e);
    e(col) = 0.0;
    for (int row = 0; row < rows; ++row)
      if (y(row) != 0.0)
        trip.emplace_back(row, col, y(row));
  }
  SparseMatrix M(rows, cols);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}
} // namespace

SparseMatrix extraction_E10(const EbarBlock& ebar, int ns)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns);
  return materialize(polar_counts(nr, ns, 1).nbar1, nr * ns,
                     [&](const Eigen::VectorXd& x) { return apply_E10(ebar, ns, x); });
}

SparseMatrix extraction_E01(const EbarBlock& ebar, int ns)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns);
  return materialize(polar_counts(nr, ns, 1).nbar1, nr * (ns - 1),
                     [&](const Eigen::VectorXd& x) { return apply_E01(ebar, ns, x); });
}

SparseMatrix extraction_E2(int nr, int ns)
{
  check_polar_sizes(nr, ns);
  const int nbar2 = polar_counts(nr, ns, 1).nbar2;
  std::vector<Eigen::Triplet<double>> trip;
  for (int l = 0; l < nbar2; ++l)
    trip.emplace_back(l, l + nr, 1.0);
  SparseMatrix E(nbar2, nr * (ns - 1));
  E.setFromTriplets(trip.begin(), trip.end());
  return E;
}

ExtractionSet assemble_3d(const EbarBlock& ebar, int ns, int nt)
{
  const int nr = ebar.nr();
  check_polar_sizes(nr, ns, nt);
  ExtractionSet x;
  x.counts = polar_counts(nr, ns, nt);
  const auto& c = x.counts;
  x.E0 = extraction_E0(ebar, ns);
  x.E10 = extraction_E10(ebar, ns);
  x.E01 = extraction_E01(ebar, ns);
  x.E2 = extraction_E2(nr, ns);
  const int full = nr * ns, red = nr * (ns - 1);
  const SparseMatrix It = identity<double>(nt);
  auto Z = [](int r, int cc) { return zeros<double>(r, cc); };
  x.E000 = kron(It, x.E0);
  x.E100 = kron(It, vstack<double>({x.E10, Z(c.nbar0, full)}));
  x.E010 = kron(It, vstack<double>({x.E01, Z(c.nbar0, red)}));
  x.E001 = kron(It, vstack<double>({Z(c.nbar1, full), x.E0}));
  x.E011 = kron(It, vstack<double>({Z(c.nbar2, red), x.E01}));
  SparseMatrix mE10 = -x.E10;
  x.E101 = kron(It, vstack<double>({Z(c.nbar2, full), mE10}));
  x.E110 = kron(It, vstack<double>({x.E2, Z(c.nbar1, red)}));
  x.E111 = kron(It, x.E2);
  return x;
}

const SparseMatrix& ExtractionSet::of(ComponentKind k) const
{
  const int code = (k.dr ? 100 : 0) + (k.ds ? 10 : 0) + (k.dt ? 1 : 0);
  switch (code)
  {
  case 0:
    return E000;
  case 100:
    return E100;
  case 10:
    return E010;
  case 1:
    return E001;
  case 11:
    return E011;
  case 101:
    return E101;
  case 110:
    return E110;
  default:
    return E111;
  }
}

int reduced_dim(const PolarCounts& c, int level)
{
  switch (level)
  {
  case 0:
    return c.n0;
  case 1:
    return c.n1;
  case 2:
    return c.n2;
  case 3:
    return c.n3;
  default:
    throw std::invalid_argument("level must be 0..3");
  }
}

Eigen::VectorXd to_tensor_coeffs(const ExtractionSet& ext, int level, const Eigen::VectorXd& x)
{
  if (x.size() != reduced_dim(ext.counts, level))
    throw std::invalid_argument("reduced coefficient length does not match level dimension");
  std::vector<Eigen::VectorXd> parts;
  Eigen::Index n = 0;
  for (auto c : level_components(level))
  {
    parts.push_back(ext.of(c).transpose() * x);
    n += parts.back().size();
  }
  Eigen::VectorXd out(n);
  Eigen::Index o = 0;
  for (auto& p : parts)
  {
    out.segment(o, p.size()) = p;
    o += p.size();
  }
  return out;
}

Eigen::VectorXd reduced_field_eval(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                   const Eigen::VectorXd& x, double r, double s, double t)
{
  if (x.size() != reduced_dim(ext.counts, level))
    throw std::invalid_argument("reduced coefficient length does not match level dimension");
  auto comps = level_components(level);
  Eigen::VectorXd v(comps.size());
  for (std::size_t m = 0; m < comps.size(); ++m)
  {
    Eigen::VectorXd tc = ext.of(comps[m]).transpose() * x;
    v(m) = seq.eval_component(comps[m], tc, r, s, t);
  }
  return v;
}

Eigen::VectorXd reduced_basis_eval(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                   int l, double r, double s, double t)
{
  const int n = reduced_dim(ext.counts, level);
  if (l < 1 || l > n)
  {
    std::ostringstream msg;
    msg << "basis index " << l << " outside 1.." << n;
    throw std::out_of_range(msg.str());
  }
  auto comps = level_components(level);
  Eigen::VectorXd v(comps.size());
  for (std::size_t m = 0; m < comps.size(); ++m)
  {
    const SparseMatrix& E = ext.of(comps[m]);
    if (E.row(l - 1).nonZeros() == 0)
    {
      v(m) = 0.0;
      continue;
    }
    Eigen::VectorXd row = E.row(l - 1).transpose();
    v(m) = seq.eval_component(comps[m], row, r, s, t);
  }
  return v;
}

Eigen::VectorXd reduced_basis_all(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                  double r, double s, double t)
{
  if (level != 0 && level != 3)
    throw std::invalid_argument("reduced_basis_all supports the scalar levels 0 and 3");
  auto c = level_components(level).front();
  return ext.of(c) * seq.eval_component_basis(c, r, s, t);
}

} // namespace polar_derham
