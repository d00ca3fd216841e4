// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polar_extraction.hpp"
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace polar_derham
{

struct IncidenceSet
{
  SparseMatrix D0, D1, D2;
  /// 1-based rows of D0, D1, D2 that carry Ebar-weighted entries.
  std::array<std::vector<int>, 3> weighted_rows;
};

/// Vertex-to-edge incidence on the control ring, n1 x n0.
SparseMatrix build_D0(int nr, int ns, int nt, const EbarBlock& ebar);
/// Edge-to-face incidence, n2 x n1.
SparseMatrix build_D1(int nr, int ns, int nt, const EbarBlock& ebar);
/// Face-to-volume incidence, n3 x n2.
SparseMatrix build_D2(int nr, int ns, int nt, const EbarBlock& ebar);

IncidenceSet build_incidence(int nr, int ns, int nt, const EbarBlock& ebar);

struct IdentityResidual
{
  std::string name;
  double residual;
};

struct CommutationReport
{
  std::vector<IdentityResidual> identities;
  double max_residual() const;
};

/// Max-abs residuals of the seven commuting-diagram identities.
CommutationReport verify_commutation(Triple n, const ExtractionSet& ext, const IncidenceSet& inc);

struct ComplexResiduals
{
  double curl_grad; // max |D1 D0|
  double div_curl;  // max |D2 D1|
};

ComplexResiduals complex_residuals(const IncidenceSet& inc);

struct RankPolicy
{
  enum class Method
  {
    svd,
    sparse_qr
  };
  Method method = Method::svd;
  /// Absolute threshold overriding max(rows, cols) * eps * sigma_max.
  std::optional<double> tolerance;
  /// Gap ratios below this only raise a warning.
  double warn_gap = 1e3;
};

struct RankInfo
{
  int rows = 0, cols = 0;
  int rank = 0;
  double sigma_max = 0;
  double threshold = 0;
  double sigma_kept = 0;    // smallest value counted
  double sigma_dropped = 0; // largest value discarded (0 if none)
  double gap_ratio = 0;     // sigma_kept / max(sigma_dropped, threshold)
};

RankInfo numerical_rank(const SparseMatrix& M, const RankPolicy& policy = {});

struct CohomologyReport
{
  std::array<int, 4> dims{};
  std::array<RankInfo, 3> ranks{};
  int euler_cohomology = 0;
  int euler_dimensions = 0;
  std::vector<std::string> warnings;
};

CohomologyReport cohomology_dimensions(const PolarCounts& c, const IncidenceSet& inc,
                                       const RankPolicy& policy = {});

/// Level-2 DOFs h with D2 h = m, built joint by joint with the joint
/// faces set to beta.
Eigen::VectorXd divergence_preimage(int nr, int ns, int nt, const Eigen::VectorXd& m,
                                    double beta = 0.0);

struct HarmonicField
{
  Eigen::VectorXd g;       // unit vector in ker D1, orthogonal to im D0
  double curl_residual;    // max |D1 g|
  double exact_component;  // norm of the projection onto im D0
};

/// Representative of the first cohomology (diagnostic only).
HarmonicField harmonic_representative(const IncidenceSet& inc);

} // namespace polar_derham
