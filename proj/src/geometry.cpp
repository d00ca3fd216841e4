// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/geometry.hpp"
#include "polar_derham/errors.hpp"
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace polar_derham
{

PolarMap build_polar_map(const TensorSequence& seq, double rho_bar)
{
  if (!(rho_bar > 2.0))
    throw std::invalid_argument("rho_bar must be greater than 2");
  const auto n = seq.sizes();
  check_polar_sizes(n.r, n.s, n.t);
  PolarMap F;
  F.rho_bar = rho_bar;
  F.theta = ring_angles(n.r);
  F.phi = ring_angles(n.t);
  F.rho.resize(n.s);
  for (int j = 1; j <= n.s; ++j)
    F.rho[j - 1] = static_cast<double>(j - 1) / (n.s - 1);
  VecIndexMap idx(n.r, n.s, n.t);
  F.points.resize(idx.size(), 3);
  for (int k = 1; k <= n.t; ++k)
    for (int j = 1; j <= n.s; ++j)
      for (int i = 1; i <= n.r; ++i)
      {
        const double th = F.theta[i - 1], ph = F.phi[k - 1], rho = F.rho[j - 1];
        const double R = rho_bar + rho * std::cos(th);
        F.points.row(idx.offset(i, j, k)) << R * std::cos(ph), R * std::sin(ph),
            rho * std::sin(th);
      }
  return F;
}

GeometryMapG build_geometry_G(const TensorSequence& seq, const ExtractionSet& ext,
                              const PolarMap& F)
{
  const auto n = seq.sizes();
  const auto& c = ext.counts;
  if (c.n0 != n.t * (n.r * (n.s - 2) + 3))
    throw ConstructionError("extraction set does not match the tensor sequence");
  VecIndexMap idx(n.r, n.s, n.t);
  GeometryMapG G;
  G.points.resize(c.n0, 3);
  const double rho2 = F.rho[1], rb = F.rho_bar, h = std::sqrt(3.0) / 2.0 * rho2;
  for (int k = 1; k <= n.t; ++k)
  {
    const int off = (k - 1) * c.nbar0;
    const double cp = std::cos(F.phi[k - 1]), sp = std::sin(F.phi[k - 1]);
    G.points.row(off + 0) << (rb + rho2) * cp, (rb + rho2) * sp, 0.0;
    G.points.row(off + 1) << (rb - 0.5 * rho2) * cp, (rb - 0.5 * rho2) * sp, h;
    G.points.row(off + 2) << (rb - 0.5 * rho2) * cp, (rb - 0.5 * rho2) * sp, -h;
    for (int j = 3; j <= n.s; ++j)
      for (int i = 1; i <= n.r; ++i)
        G.points.row(off + 2 + i + (j - 3) * n.r) = F.points.row(idx.offset(i, j, k));
  }
  G.tensor_points = ext.E000.transpose() * G.points;
  return G;
}

namespace
{
struct Bases
{
  Eigen::VectorXd r, dr, s, ds, t, dt;
};

Bases bases(const TensorSequence& seq, double r, double s, double t)
{
  return {seq.sr().eval_basis(r), seq.sr().eval_basis_derivatives(r),
          seq.ss().eval_basis(s), seq.ss().eval_basis_derivatives(s),
          seq.st().eval_basis(t), seq.st().eval_basis_derivatives(t)};
}
} // namespace

MapEval eval_map_and_jacobian(const TensorSequence& seq, const ControlNet& P, double r, double s,
                              double t)
{
  const auto n = seq.sizes();
  if (P.rows() != n.r * n.s * n.t)
    throw std::invalid_argument("control net size does not match the level-0 space");
  const Bases b = bases(seq, r, s, t);
  MapEval m;
  m.x.setZero();
  m.DF.setZero();
  for (int k = 0; k < n.t; ++k)
    for (int j = 0; j < n.s; ++j)
    {
      const double st = b.s(j) * b.t(k), dst = b.ds(j) * b.t(k), sdt = b.s(j) * b.dt(k);
      if (st == 0.0 && dst == 0.0 && sdt == 0.0)
        continue;
      for (int i = 0; i < n.r; ++i)
      {
        const Eigen::Vector3d p = P.row(i + n.r * (j + n.s * k)).transpose();
        m.x += b.r(i) * st * p;
        m.DF.col(0) += b.dr(i) * st * p;
        m.DF.col(1) += b.r(i) * dst * p;
        m.DF.col(2) += b.r(i) * sdt * p;
      }
    }
  m.det = m.DF.determinant();
  return m;
}

double singularity_floor(const TensorSequence& seq) { return 1e-8 * seq.ss().length(); }

namespace
{
Eigen::VectorXd transform(int level, const MapEval& m, const Eigen::VectorXd& phi)
{
  switch (level)
  {
  case 0:
    return phi;
  case 1:
    return m.DF.transpose().partialPivLu().solve(Eigen::Vector3d(phi));
  case 2:
    return m.DF * Eigen::Vector3d(phi) / m.det;
  default:
    return phi / m.det;
  }
}

void check_floor(const TensorSequence& seq, int level, double s)
{
  const double floor = singularity_floor(seq);
  if (level > 0 && s < floor)
  {
    std::ostringstream msg;
    msg << "s = " << s << " is below the singularity floor s_min = " << floor
        << " for level-" << level << " pushforward";
    throw SingularityError(msg.str(), floor);
  }
}
} // namespace

PushforwardValue pushforward_eval(const TensorSequence& seq, const ExtractionSet& ext,
                                  const ControlNet& tensor_points, int level,
                                  const Eigen::VectorXd& coeffs, double r, double s, double t)
{
  if (level < 0 || level > 3)
    throw std::invalid_argument("level must be 0..3");
  check_floor(seq, level, s);
  const MapEval m = eval_map_and_jacobian(seq, tensor_points, r, s, t);
  const Eigen::VectorXd phi = reduced_field_eval(seq, ext, level, coeffs, r, s, t);
  return {m.x, transform(level, m, phi)};
}

PushforwardValue pushforward_tensor_eval(const TensorSequence& seq,
                                         const ControlNet& tensor_points, int level,
                                         const Eigen::VectorXd& tensor_coeffs, double r, double s,
                                         double t)
{
  if (level < 0 || level > 3)
    throw std::invalid_argument("level must be 0..3");
  if (tensor_coeffs.size() != seq.level_dim(level))
    throw std::invalid_argument("tensor coefficient length does not match level dimension");
  check_floor(seq, level, s);
  const MapEval m = eval_map_and_jacobian(seq, tensor_points, r, s, t);
  auto comps = level_components(level);
  auto off = seq.component_offsets(level);
  Eigen::VectorXd phi(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    phi(c) = seq.eval_component(
        comps[c], tensor_coeffs.segment(off[c], seq.component_dim(comps[c])), r, s, t);
  return {m.x, transform(level, m, phi)};
}

SmoothnessProbe polar_smoothness_probe_tensor(const TensorSequence& seq,
                                              const ControlNet& tensor_points,
                                              const Eigen::VectorXd& f, double t,
                                              const std::vector<double>& eps_list, int r_samples)
{
  if (r_samples < 2)
    throw std::invalid_argument("need at least two r samples");
  if (f.size() != seq.level_dim(0))
    throw std::invalid_argument("level-0 tensor coefficient length mismatch");
  const double R = seq.sr().length(), S = seq.ss().length();
  const ComponentKind c0{};
  std::vector<double> rs(r_samples);
  for (int a = 0; a < r_samples; ++a)
    rs[a] = seq.sr().a() + a * R / r_samples;

  SmoothnessProbe p;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double r : rs)
  {
    const double v = seq.eval_component(c0, f, r, seq.ss().a(), t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  p.value_discrepancy = hi - lo;

  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  double scale = 0;
  for (double e : eps)
  {
    Eigen::Vector3d gmin = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d gmax = -gmin;
    for (double r : rs)
    {
      const double s = seq.ss().a() + e * S;
      const MapEval m = eval_map_and_jacobian(seq, tensor_points, r, s, t);
      const Eigen::Vector3d gq = seq.eval_gradient(f, r, s, t);
      const Eigen::Vector3d g = m.DF.transpose().partialPivLu().solve(gq);
      gmin = gmin.cwiseMin(g);
      gmax = gmax.cwiseMax(g);
      scale = std::max(scale, g.cwiseAbs().maxCoeff());
    }
    p.rows.push_back({e, (gmax - gmin).maxCoeff()});
  }
  const double floor = 1e-9 * (1.0 + scale);
  for (std::size_t k = 1; k < p.rows.size(); ++k)
    if (p.rows[k].gradient_spread > p.rows[k - 1].gradient_spread
        && p.rows[k].gradient_spread > floor)
      p.c1_decreasing = false;
  return p;
}

SmoothnessProbe polar_smoothness_probe(const TensorSequence& seq, const ExtractionSet& ext,
                                       const ControlNet& tensor_points, const Eigen::VectorXd& f,
                                       double t, const std::vector<double>& eps_list,
                                       int r_samples)
{
  return polar_smoothness_probe_tensor(seq, tensor_points, to_tensor_coeffs(ext, 0, f), t,
                                       eps_list, r_samples);
}

} // namespace polar_derham
