// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "complex.hpp"
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace polar_derham
{

/// Invalid configuration or command-line input.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct ComplexConfig
{
  TorusComplexSpec spec;
  std::optional<double> rank_tolerance;
  std::string output_dir = "polar_bundle";
  /// Fields that were absent and received defaults.
  std::vector<std::string> defaulted;
};

/// Parse a JSON config. Accepted keys: degrees, sizes | distinct_knots |
/// knots {r, s, t}, rho_bar, lengths, rank_tolerance, output_dir.
ComplexConfig parse_config(const nlohmann::json& j);
ComplexConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ComplexConfig& cfg);

nlohmann::json dimensions_to_json(const PolarComplex& cx);

/// Coordinate format: "rows cols nnz" then 1-based "i j value" lines in
/// row-major order; values use 17 significant digits.
void write_triplets(std::ostream& os, const SparseMatrix& M);
SparseMatrix read_triplets(std::istream& is);
void write_triplets(const std::filesystem::path& path, const SparseMatrix& M);
SparseMatrix read_triplets(const std::filesystem::path& path);

/// Write config.json, dimensions.json, control_nets.json and
/// matrices/<NAME>.txt into dir.
void write_bundle(const PolarComplex& cx, const ComplexConfig& cfg,
                  const std::filesystem::path& dir);

/// Config echoed into a bundle directory.
ComplexConfig load_bundle_config(const std::filesystem::path& dir);

/// Write the named matrices ("ALL" for every one) into dir; returns the
/// written paths. Unknown names raise ConfigError listing them.
std::vector<std::filesystem::path> export_matrices(const PolarComplex& cx,
                                                   const std::vector<std::string>& names,
                                                   const std::filesystem::path& dir);

struct VerifyOptions
{
  double tol = 1e-12;
  RankPolicy rank;
  /// Negative control: zero one 1-based row of a named matrix.
  std::optional<std::pair<std::string, int>> drop_row;
  std::uint64_t seed = 20260415;
  int threads = 0; // 0: from POLAR_DERHAM_THREADS or hardware
};

struct VerificationResult
{
  nlohmann::json report;
  bool passed = false;
  std::vector<std::string> failures;
};

VerificationResult run_verification(const ComplexConfig& cfg, const VerifyOptions& opt = {});

/// Thread cap from POLAR_DERHAM_THREADS (>= 1), else hardware concurrency.
int worker_threads();

struct SampleGrid
{
  int nr = 5, ns = 5, nt = 5;
  double s_start = 0.0;
};

/// CSV "r,s,t,x,y,z,v1[,v2,v3]" on a tensor grid, t-major then s then r.
void write_samples(std::ostream& os, const PolarComplex& cx, int level,
                   const Eigen::VectorXd& coeffs, const SampleGrid& grid);

/// Coefficients from a JSON array or whitespace-separated numbers.
Eigen::VectorXd read_coefficients(std::istream& is);

/// Parse "a,b,c" into three integers.
Triple parse_triple(const std::string& s);

} // namespace polar_derham
