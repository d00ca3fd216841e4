// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "geometry.hpp"
#include "incidence.hpp"
#include <map>
#include <optional>
#include <string>

namespace polar_derham
{

struct TorusComplexSpec
{
  Triple degrees{2, 2, 2};
  /// Value-space dimensions (n^r, n^s, n^t); n^r and n^t are periodic.
  Triple sizes{4, 4, 3};
  double rho_bar = 3.0;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  /// Optional explicit open knot vectors; they override sizes and lengths.
  std::optional<std::array<std::vector<double>, 3>> knots;
  /// Shift of the Ebar entry (1, (1, 2)); negative control only.
  double ebar_perturbation = 0.0;
};

struct PolarComplex
{
  TorusComplexSpec spec;
  TensorSequence seq;
  EbarBlock ebar;
  ExtractionSet ext;
  IncidenceSet inc;
  TensorDerivatives tensor_D;
  PolarMap F;
  GeometryMapG G;

  const PolarCounts& counts() const { return ext.counts; }
  Triple sizes() const { return seq.sizes(); }
};

TensorSequence build_sequence(const TorusComplexSpec& spec);
PolarComplex build_complex(const TorusComplexSpec& spec);

enum class MapChoice
{
  polar, // F
  smooth // G
};

const ControlNet& map_points(const PolarComplex& cx, MapChoice m);

CommutationReport verify_commutation(const PolarComplex& cx);
CohomologyReport cohomology_dimensions(const PolarComplex& cx, const RankPolicy& policy = {});
Eigen::VectorXd divergence_preimage(const PolarComplex& cx, const Eigen::VectorXd& m,
                                    double beta = 0.0);
PushforwardValue pushforward_eval(const PolarComplex& cx, int level, const Eigen::VectorXd& coeffs,
                                  double r, double s, double t,
                                  MapChoice m = MapChoice::polar);
SmoothnessProbe polar_smoothness_probe(const PolarComplex& cx, const Eigen::VectorXd& f, double t,
                                       const std::vector<double>& eps_list,
                                       MapChoice m = MapChoice::polar);

/// Every exportable matrix by name (E000..E111, E0, E10, E01, E2,
/// D0, D1, D2, D100, D010, D001, H0_r, H1_r, H0_t, H1_t).
std::map<std::string, SparseMatrix> named_matrices(const PolarComplex& cx);

} // namespace polar_derham
