// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polar_extraction.hpp"
#include <vector>

namespace polar_derham
{

using ControlNet = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Circular cross-section torus map with control points on the
/// level-0 tensor basis.
struct PolarMap
{
  double rho_bar = 3.0;
  std::vector<double> rho, theta, phi;
  ControlNet points; // row = VecIndexMap offset
};

PolarMap build_polar_map(const TensorSequence& seq, double rho_bar = 3.0);

/// Smooth map written on the reduced basis N^(0).
struct GeometryMapG
{
  ControlNet points;        // n0 rows
  ControlNet tensor_points; // E000^T points
};

GeometryMapG build_geometry_G(const TensorSequence& seq, const ExtractionSet& ext,
                              const PolarMap& F);

struct MapEval
{
  Eigen::Vector3d x;
  Eigen::Matrix3d DF; // columns d/dr, d/ds, d/dt
  double det;
};

/// Tensor-product spline map with the given control net and its Jacobian.
MapEval eval_map_and_jacobian(const TensorSequence& seq, const ControlNet& tensor_points, double r,
                              double s, double t);

/// Singularity floor 1e-8 * S for Jacobian-weighted pushforwards.
double singularity_floor(const TensorSequence& seq);

struct PushforwardValue
{
  Eigen::Vector3d x;
  Eigen::VectorXd value; // 1 entry for levels 0 and 3, else 3
};

/// Physical value of a reduced field of the given level at F(r,s,t).
/// Levels 1-3 throw SingularityError below s_min.
PushforwardValue pushforward_eval(const TensorSequence& seq, const ExtractionSet& ext,
                                  const ControlNet& tensor_points, int level,
                                  const Eigen::VectorXd& coeffs, double r, double s, double t);

/// Same for raw tensor coefficients (stacked over the level's components).
PushforwardValue pushforward_tensor_eval(const TensorSequence& seq,
                                         const ControlNet& tensor_points, int level,
                                         const Eigen::VectorXd& tensor_coeffs, double r, double s,
                                         double t);

struct ProbeRow
{
  double eps;
  double gradient_spread;
};

struct SmoothnessProbe
{
  double value_discrepancy = 0;
  std::vector<ProbeRow> rows;
  /// Spreads non-increasing as eps shrinks (up to a round-off floor).
  bool c1_decreasing = true;
};

/// Polar-curve regularity of a level-0 field given by tensor coefficients:
/// (i) spread of f(r, 0, t) over r samples; (ii) for each eps, the
/// largest pairwise distance between physical gradients at (r, eps, t).
SmoothnessProbe polar_smoothness_probe_tensor(const TensorSequence& seq,
                                              const ControlNet& tensor_points,
                                              const Eigen::VectorXd& tensor_coeffs, double t,
                                              const std::vector<double>& eps_list,
                                              int r_samples = 8);

/// Probe for reduced V0 coefficients.
SmoothnessProbe polar_smoothness_probe(const TensorSequence& seq, const ExtractionSet& ext,
                                       const ControlNet& tensor_points, const Eigen::VectorXd& f,
                                       double t, const std::vector<double>& eps_list,
                                       int r_samples = 8);

} // namespace polar_derham
