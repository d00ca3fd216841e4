// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
//
// polar-derham: build, verify, sample and export polar spline complexes
// on the solid torus.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage error.

#include <CLI11.hpp>
#include <polar_derham/cli_io.hpp>
#include <polar_derham/errors.hpp>

#include <fstream>
#include <iostream>

namespace pd = polar_derham;
using nlohmann::json;

namespace
{

struct Source
{
  std::string config;
  std::string bundle;
  std::string sizes, degrees;
  std::optional<double> rho_bar;

  void add(CLI::App* app, bool with_bundle)
  {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    if (with_bundle)
      app->add_option("--bundle", bundle, "bundle directory written by 'build'");
    app->add_option("--sizes", sizes, "n^r,n^s,n^t (overrides the config)");
    app->add_option("--degrees", degrees, "p^r,p^s,p^t (overrides the config)");
    app->add_option("--rho-bar", rho_bar, "major-radius offset, > 2");
  }

  pd::ComplexConfig resolve() const
  {
    if (!config.empty() && !bundle.empty())
      throw pd::ConfigError("give either --config or --bundle, not both");
    json j = json::object();
    if (!config.empty() || !bundle.empty())
    {
      const std::string path = config.empty() ? bundle + "/config.json" : config;
      std::ifstream in(path);
      if (!in)
        throw pd::ConfigError("cannot open " + path);
      try
      {
        in >> j;
      }
      catch (const json::parse_error& e)
      {
        throw pd::ConfigError(path + " is not valid JSON: " + e.what());
      }
      if (!j.is_object())
        throw pd::ConfigError(path + " must hold a JSON object");
      j.erase("defaulted");
    }
    if (!sizes.empty())
    {
      const auto n = pd::parse_triple(sizes);
      j.erase("distinct_knots");
      j.erase("knots");
      j["sizes"] = {n.r, n.s, n.t};
    }
    if (!degrees.empty())
    {
      const auto p = pd::parse_triple(degrees);
      j["degrees"] = {p.r, p.s, p.t};
    }
    if (rho_bar)
      j["rho_bar"] = *rho_bar;
    return pd::parse_config(j);
  }
};

std::pair<std::string, int> parse_drop_row(const std::string& s)
{
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw pd::ConfigError("--drop-row expects NAME:ROW, got '" + s + "'");
  try
  {
    return {s.substr(0, colon), std::stoi(s.substr(colon + 1))};
  }
  catch (const std::exception&)
  {
    throw pd::ConfigError("--drop-row expects NAME:ROW, got '" + s + "'");
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Polar spline de Rham complexes on the solid torus"};
  app.require_subcommand(1);

  Source build_src, verify_src, sample_src, export_src;

  auto* build = app.add_subcommand("build", "assemble a complex and write a bundle");
  build_src.add(build, false);
  std::string build_out;
  build->add_option("--out", build_out, "bundle directory (default: config output_dir)");

  auto* verify = app.add_subcommand("verify", "run every structural check, JSON report");
  verify_src.add(verify, true);
  std::string verify_out, drop_row, rank_method = "svd";
  double tol = 1e-12, perturb = 0.0;
  std::uint64_t seed = 20260415;
  verify->add_option("--out", verify_out, "report file (default: stdout)");
  verify->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--perturb-ebar", perturb, "shift one Ebar entry (negative control)");
  verify->add_option("--drop-row", drop_row, "zero a matrix row, NAME:ROW (negative control)");
  verify->add_option("--rank-method", rank_method, "svd or qr")
      ->check(CLI::IsMember({"svd", "qr"}));
  verify->add_option("--seed", seed, "seed for randomized checks");

  auto* sample = app.add_subcommand("sample", "evaluate a pushed-forward field on a grid (CSV)");
  sample_src.add(sample, true);
  int level = 0, basis = 0;
  std::string coeffs_path, grid = "5,5,5", sample_out;
  double s_start = 0.0;
  sample->add_option("--level", level, "de Rham level 0..3")->check(CLI::Range(0, 3));
  auto* coeff_opt = sample->add_option("--coeffs", coeffs_path, "coefficient file");
  auto* basis_opt = sample->add_option("--basis", basis, "1-based reduced basis index");
  coeff_opt->excludes(basis_opt);
  sample->add_option("--grid", grid, "grid counts n_r,n_s,n_t");
  sample->add_option("--s-start", s_start, "first s value of the grid");
  sample->add_option("--out", sample_out, "CSV file (default: stdout)");

  auto* exp = app.add_subcommand("export", "write matrices in triplet format");
  export_src.add(exp, true);
  std::vector<std::string> names;
  std::string export_out = "matrices";
  exp->add_option("names", names, "matrix names or ALL")->required();
  exp->add_option("--out", export_out, "output directory");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try
  {
    if (*build)
    {
      auto cfg = build_src.resolve();
      const std::string dir = build_out.empty() ? cfg.output_dir : build_out;
      cfg.output_dir = dir;
      const auto cx = pd::build_complex(cfg.spec);
      pd::write_bundle(cx, cfg, dir);
      std::cout << pd::dimensions_to_json(cx).dump() << '\n';
      return 0;
    }
    if (*verify)
    {
      auto cfg = verify_src.resolve();
      cfg.spec.ebar_perturbation = perturb;
      pd::VerifyOptions opt;
      opt.tol = tol;
      opt.seed = seed;
      if (rank_method == "qr")
        opt.rank.method = pd::RankPolicy::Method::sparse_qr;
      if (!drop_row.empty())
        opt.drop_row = parse_drop_row(drop_row);
      const auto res = pd::run_verification(cfg, opt);
      const std::string text = res.report.dump(2);
      if (verify_out.empty())
        std::cout << text << '\n';
      else
      {
        std::ofstream out(verify_out);
        if (!out)
          throw pd::ConfigError("cannot write " + verify_out);
        out << text << '\n';
      }
      for (const auto& f : res.failures)
        std::cerr << "FAILED: " << f << '\n';
      return res.passed ? 0 : 1;
    }
    if (*sample)
    {
      const auto cfg = sample_src.resolve();
      const auto cx = pd::build_complex(cfg.spec);
      const int n = pd::reduced_dim(cx.counts(), level);
      Eigen::VectorXd c;
      if (!coeffs_path.empty())
      {
        std::ifstream in(coeffs_path);
        if (!in)
          throw pd::ConfigError("cannot open " + coeffs_path);
        c = pd::read_coefficients(in);
      }
      else
      {
        if (basis < 1 || basis > n)
          throw pd::ConfigError("--basis must lie in 1.." + std::to_string(n));
        c = Eigen::VectorXd::Zero(n);
        c(basis - 1) = 1.0;
      }
      const auto g = pd::parse_triple(grid);
      pd::SampleGrid sg{g.r, g.s, g.t, s_start};
      if (sample_out.empty())
        pd::write_samples(std::cout, cx, level, c, sg);
      else
      {
        std::ofstream out(sample_out);
        if (!out)
          throw pd::ConfigError("cannot write " + sample_out);
        pd::write_samples(out, cx, level, c, sg);
      }
      return 0;
    }
    if (*exp)
    {
      const auto cfg = export_src.resolve();
      const auto cx = pd::build_complex(cfg.spec);
      for (const auto& p : pd::export_matrices(cx, names, export_out))
        std::cout << p.string() << '\n';
      return 0;
    }
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const pd::ConstructionError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const std::domain_error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
