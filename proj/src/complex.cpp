// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/complex.hpp"
#include "polar_derham/errors.hpp"

namespace polar_derham
{

TensorSequence build_sequence(const TorusComplexSpec& spec)
{
  if (!spec.knots)
    return build_tensor_sequence(spec.degrees, spec.sizes, spec.lengths);
  const auto& kv = *spec.knots;
  const Triple p = spec.degrees;
  if (p.r < 2 || p.s < 2 || p.t < 2)
    throw ConstructionError("degrees must be at least 2 in every direction");
  return TensorSequence(SplineSpace(KnotVector(p.r, kv[0]), true),
                        SplineSpace(KnotVector(p.s, kv[1]), false),
                        SplineSpace(KnotVector(p.t, kv[2]), true));
}

PolarComplex build_complex(const TorusComplexSpec& spec)
{
  TensorSequence seq = build_sequence(spec);
  const Triple n = seq.sizes();
  check_polar_sizes(n.r, n.s, n.t);
  EbarBlock ebar = ebar_block(n.r);
  if (spec.ebar_perturbation != 0.0)
    ebar = ebar.perturbed(1, 1, 2, spec.ebar_perturbation);
  ExtractionSet ext = assemble_3d(ebar, n.s, n.t);
  IncidenceSet inc = build_incidence(n.r, n.s, n.t, ebar);
  TensorDerivatives D = derivative_matrices(seq);
  PolarMap F = build_polar_map(seq, spec.rho_bar);
  GeometryMapG G = build_geometry_G(seq, ext, F);
  TorusComplexSpec echo = spec;
  echo.sizes = n;
  return PolarComplex{echo, std::move(seq), std::move(ebar), std::move(ext), std::move(inc),
                      std::move(D), std::move(F), std::move(G)};
}

const ControlNet& map_points(const PolarComplex& cx, MapChoice m)
{
  return m == MapChoice::polar ? cx.F.points : cx.G.tensor_points;
}

CommutationReport verify_commutation(const PolarComplex& cx)
{
  return verify_commutation(cx.sizes(), cx.ext, cx.inc);
}

CohomologyReport cohomology_dimensions(const PolarComplex& cx, const RankPolicy& policy)
{
  return cohomology_dimensions(cx.counts(), cx.inc, policy);
}

Eigen::VectorXd divergence_preimage(const PolarComplex& cx, const Eigen::VectorXd& m, double beta)
{
  const auto n = cx.sizes();
  return divergence_preimage(n.r, n.s, n.t, m, beta);
}

PushforwardValue pushforward_eval(const PolarComplex& cx, int level, const Eigen::VectorXd& coeffs,
                                  double r, double s, double t, MapChoice m)
{
  return pushforward_eval(cx.seq, cx.ext, map_points(cx, m), level, coeffs, r, s, t);
}

SmoothnessProbe polar_smoothness_probe(const PolarComplex& cx, const Eigen::VectorXd& f, double t,
                                       const std::vector<double>& eps_list, MapChoice m)
{
  return polar_smoothness_probe(cx.seq, cx.ext, map_points(cx, m), f, t, eps_list);
}

std::map<std::string, SparseMatrix> named_matrices(const PolarComplex& cx)
{
  const auto& e = cx.ext;
  return {{"E000", e.E000},
          {"E100", e.E100},
          {"E010", e.E010},
          {"E001", e.E001},
          {"E011", e.E011},
          {"E101", e.E101},
          {"E110", e.E110},
          {"E111", e.E111},
          {"E0", e.E0},
          {"E10", e.E10},
          {"E01", e.E01},
          {"E2", e.E2},
          {"D0", cx.inc.D0},
          {"D1", cx.inc.D1},
          {"D2", cx.inc.D2},
          {"D100", to_double(cx.tensor_D.D100)},
          {"D010", to_double(cx.tensor_D.D010)},
          {"D001", to_double(cx.tensor_D.D001)},
          {"H0_r", cx.seq.sr().H0()},
          {"H1_r", cx.seq.sr().H1()},
          {"H0_t", cx.seq.st().H0()},
          {"H1_t", cx.seq.st().H1()}};
}

} // namespace polar_derham
