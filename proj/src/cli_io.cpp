// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/cli_io.hpp"
#include "polar_derham/errors.hpp"
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace polar_derham
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

Triple triple_from(const json& v, const char* key)
{
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(std::string("'") + key + "' must be an array of three integers");
  for (const auto& x : v)
    if (!x.is_number_integer())
      throw ConfigError(std::string("'") + key + "' must contain integers");
  return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

json triple_json(Triple t) { return json::array({t.r, t.s, t.t}); }

} // namespace

ComplexConfig parse_config(const json& j)
{
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known
      = {"degrees",  "sizes",          "distinct_knots", "knots",
         "rho_bar",  "lengths",        "rank_tolerance", "output_dir",
         "defaulted", "schema_version"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key))
      throw ConfigError("unknown config key '" + key + "'");

  ComplexConfig cfg;
  auto& sp = cfg.spec;
  if (j.contains("degrees"))
    sp.degrees = triple_from(j["degrees"], "degrees");
  else
    cfg.defaulted.push_back("degrees");
  if (sp.degrees.r < 2 || sp.degrees.s < 2 || sp.degrees.t < 2)
    throw ConfigError("degrees must be at least 2 in every direction");

  const int given = j.contains("sizes") + j.contains("distinct_knots") + j.contains("knots");
  if (given > 1)
    throw ConfigError("give only one of 'sizes', 'distinct_knots', 'knots'");
  if (j.contains("sizes"))
    sp.sizes = triple_from(j["sizes"], "sizes");
  else if (j.contains("distinct_knots"))
  {
    const Triple d = triple_from(j["distinct_knots"], "distinct_knots");
    if (d.r < 2 || d.s < 2 || d.t < 2)
      throw ConfigError("distinct knot counts must be at least 2");
    sp.sizes = {d.r + sp.degrees.r - 3, d.s + sp.degrees.s - 1, d.t + sp.degrees.t - 3};
  }
  else if (j.contains("knots"))
  {
    const auto& k = j["knots"];
    if (!k.is_object() || !k.contains("r") || !k.contains("s") || !k.contains("t"))
      throw ConfigError("'knots' must be an object with arrays r, s, t");
    std::array<std::vector<double>, 3> kv;
    const char* names[3] = {"r", "s", "t"};
    for (int d = 0; d < 3; ++d)
    {
      try
      {
        kv[d] = k[names[d]].get<std::vector<double>>();
      }
      catch (const json::exception&)
      {
        throw ConfigError(std::string("knots.") + names[d] + " must be an array of numbers");
      }
    }
    sp.knots = kv;
  }
  else
    cfg.defaulted.push_back("sizes");

  if (j.contains("rho_bar"))
  {
    if (!j["rho_bar"].is_number())
      throw ConfigError("'rho_bar' must be a number");
    sp.rho_bar = j["rho_bar"].get<double>();
  }
  else
    cfg.defaulted.push_back("rho_bar");
  if (!(sp.rho_bar > 2.0))
  {
    std::ostringstream msg;
    msg << "rho_bar must be greater than 2 (got " << sp.rho_bar << ")";
    throw ConfigError(msg.str());
  }

  if (j.contains("lengths"))
  {
    const auto& L = j["lengths"];
    if (!L.is_array() || L.size() != 3)
      throw ConfigError("'lengths' must be an array of three numbers");
    for (int d = 0; d < 3; ++d)
    {
      if (!L[d].is_number() || !(L[d].get<double>() > 0))
        throw ConfigError("'lengths' entries must be positive numbers");
      sp.lengths[d] = L[d].get<double>();
    }
  }
  else
    cfg.defaulted.push_back("lengths");

  if (j.contains("rank_tolerance") && !j["rank_tolerance"].is_null())
  {
    if (!j["rank_tolerance"].is_number() || !(j["rank_tolerance"].get<double>() > 0))
      throw ConfigError("'rank_tolerance' must be a positive number or null");
    cfg.rank_tolerance = j["rank_tolerance"].get<double>();
  }
  if (j.contains("output_dir"))
  {
    if (!j["output_dir"].is_string())
      throw ConfigError("'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }

  if (!sp.knots)
  {
    const Triple n = sp.sizes;
    check_polar_sizes(n.r, n.s, n.t);
    build_tensor_sequence(sp.degrees, n, sp.lengths);
  }
  else
  {
    const Triple n = build_sequence(sp).sizes();
    check_polar_sizes(n.r, n.s, n.t);
    sp.sizes = n;
  }
  return cfg;
}

ComplexConfig load_config(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  json j;
  try
  {
    in >> j;
  }
  catch (const json::parse_error& e)
  {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ComplexConfig& cfg)
{
  const auto& sp = cfg.spec;
  json j;
  j["degrees"] = triple_json(sp.degrees);
  if (sp.knots)
    j["knots"] = {{"r", (*sp.knots)[0]}, {"s", (*sp.knots)[1]}, {"t", (*sp.knots)[2]}};
  else
    j["sizes"] = triple_json(sp.sizes);
  j["rho_bar"] = sp.rho_bar;
  j["lengths"] = sp.lengths;
  j["rank_tolerance"] = cfg.rank_tolerance ? json(*cfg.rank_tolerance) : json(nullptr);
  j["output_dir"] = cfg.output_dir;
  j["defaulted"] = cfg.defaulted;
  return j;
}

json dimensions_to_json(const PolarComplex& cx)
{
  const auto n = cx.sizes();
  const auto& c = cx.counts();
  return {{"nr", n.r},
          {"ns", n.s},
          {"nt", n.t},
          {"nbar0", c.nbar0},
          {"nbar1", c.nbar1},
          {"nbar2", c.nbar2},
          {"n0", c.n0},
          {"n1", c.n1},
          {"n2", c.n2},
          {"n3", c.n3},
          {"N0", cx.seq.level_dim(0)},
          {"N1", cx.seq.level_dim(1)},
          {"N2", cx.seq.level_dim(2)},
          {"N3", cx.seq.level_dim(3)}};
}

void write_triplets(std::ostream& os, const SparseMatrix& M)
{
  const SparseMatrix P = pruned(M);
  os << P.rows() << ' ' << P.cols() << ' ' << P.nonZeros() << '\n';
  char buf[64];
  for (int i = 0; i < P.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(P, i); it; ++it)
    {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
}

SparseMatrix read_triplets(std::istream& is)
{
  long rows = -1, cols = -1, nnz = -1;
  if (!(is >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    throw std::runtime_error("triplet file: malformed header");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nnz);
  for (long k = 0; k < nnz; ++k)
  {
    long i, j;
    std::string v;
    if (!(is >> i >> j >> v))
      throw std::runtime_error("triplet file: truncated entry list");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw std::runtime_error("triplet file: index out of range");
    trip.emplace_back(i - 1, j - 1, std::strtod(v.c_str(), nullptr));
  }
  SparseMatrix M(rows, cols);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

void write_triplets(const fs::path& path, const SparseMatrix& M)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  write_triplets(out, M);
}

SparseMatrix read_triplets(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  return read_triplets(in);
}

namespace
{
json net_json(const ControlNet& P)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    a.push_back({P(i, 0), P(i, 1), P(i, 2)});
  return a;
}

void write_json(const fs::path& path, const json& j)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}
} // namespace

std::vector<fs::path> export_matrices(const PolarComplex& cx, const std::vector<std::string>& names,
                                      const fs::path& dir)
{
  const auto all = named_matrices(cx);
  std::vector<std::string> wanted;
  std::vector<std::string> unknown;
  for (const auto& n : names)
  {
    if (n == "ALL")
    {
      for (const auto& [k, _] : all)
        wanted.push_back(k);
    }
    else if (all.count(n))
      wanted.push_back(n);
    else
      unknown.push_back(n);
  }
  if (!unknown.empty())
  {
    std::ostringstream msg;
    msg << "unknown matrix name(s):";
    for (const auto& u : unknown)
      msg << ' ' << u;
    msg << "; known:";
    for (const auto& [k, _] : all)
      msg << ' ' << k;
    throw ConfigError(msg.str());
  }
  fs::create_directories(dir);
  std::vector<fs::path> out;
  std::set<std::string> done;
  for (const auto& n : wanted)
  {
    if (!done.insert(n).second)
      continue;
    out.push_back(dir / (n + ".txt"));
    write_triplets(out.back(), all.at(n));
  }
  return out;
}

void write_bundle(const PolarComplex& cx, const ComplexConfig& cfg, const fs::path& dir)
{
  fs::create_directories(dir);
  write_json(dir / "config.json", config_to_json(cfg));
  write_json(dir / "dimensions.json", dimensions_to_json(cx));
  write_json(dir / "control_nets.json",
             {{"F", net_json(cx.F.points)}, {"G", net_json(cx.G.points)}});
  export_matrices(cx, {"ALL"}, dir / "matrices");
}

ComplexConfig load_bundle_config(const fs::path& dir)
{
  if (!fs::is_directory(dir))
    throw ConfigError("bundle directory " + dir.string() + " does not exist");
  ComplexConfig cfg = load_config(dir / "config.json");
  return cfg;
}

int worker_threads()
{
  if (const char* env = std::getenv("POLAR_DERHAM_THREADS"))
  {
    const int n = std::atoi(env);
    if (n >= 1)
      return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace
{

template <typename F>
void parallel_for(int n, int threads, F&& body)
{
  threads = std::max(1, std::min(threads, n));
  if (threads == 1)
  {
    for (int i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++)
        body(i);
    });
  for (auto& t : pool)
    t.join();
}

SparseMatrix* matrix_slot(PolarComplex& cx, const std::string& name)
{
  auto& e = cx.ext;
  if (name == "D0")
    return &cx.inc.D0;
  if (name == "D1")
    return &cx.inc.D1;
  if (name == "D2")
    return &cx.inc.D2;
  const std::pair<const char*, SparseMatrix*> table[]
      = {{"E000", &e.E000}, {"E100", &e.E100}, {"E010", &e.E010}, {"E001", &e.E001},
         {"E011", &e.E011}, {"E101", &e.E101}, {"E110", &e.E110}, {"E111", &e.E111}};
  for (const auto& [n, p] : table)
    if (name == n)
      return p;
  return nullptr;
}

json rank_json(const char* name, const RankInfo& r)
{
  return {{"matrix", name},
          {"rows", r.rows},
          {"cols", r.cols},
          {"rank", r.rank},
          {"sigma_max", r.sigma_max},
          {"threshold", r.threshold},
          {"sigma_kept", r.sigma_kept},
          {"sigma_dropped", r.sigma_dropped},
          {"gap_ratio", r.gap_ratio}};
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

} // namespace

VerificationResult run_verification(const ComplexConfig& cfg, const VerifyOptions& opt)
{
  using clock = std::chrono::steady_clock;
  VerificationResult res;
  json& rep = res.report;
  json timings;
  const int threads = opt.threads > 0 ? opt.threads : worker_threads();
  auto fail = [&](const std::string& msg) { res.failures.push_back(msg); };
  auto stamp = [&](const char* key, clock::time_point t0) {
    timings[key] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  rep["schema_version"] = 1;
  rep["config"] = config_to_json(cfg);
  rep["tolerance"] = opt.tol;

  auto t0 = clock::now();
  PolarComplex cx = build_complex(cfg.spec);
  stamp("build", t0);
  if (opt.drop_row)
  {
    const auto& [name, row] = *opt.drop_row;
    SparseMatrix* M = matrix_slot(cx, name);
    if (!M)
      throw ConfigError("--drop-row: unknown matrix '" + name + "'");
    if (row < 1 || row > M->rows())
      throw ConfigError("--drop-row: row out of range for " + name);
    M->row(row - 1) *= 0.0;
    M->prune(0.0, 0.0);
    rep["negative_control"]["drop_row"] = {{"matrix", name}, {"row", row}};
  }
  if (cfg.spec.ebar_perturbation != 0.0)
    rep["negative_control"]["perturb_ebar"] = cfg.spec.ebar_perturbation;

  const Triple n = cx.sizes();
  const auto& c = cx.counts();
  rep["dimensions"] = dimensions_to_json(cx);

  // counts
  {
    const bool ok = c.n0 == n.t * (n.r * (n.s - 2) + 3) && c.n1 == n.t * (3 * n.r * (n.s - 2) + 5)
                    && c.n2 == n.t * (c.nbar1 + c.nbar2) && c.n3 == n.t * c.nbar2
                    && c.n0 - c.n1 + c.n2 - c.n3 == 0;
    rep["counts"] = {{"euler", c.n0 - c.n1 + c.n2 - c.n3}, {"passed", ok}};
    if (!ok)
      fail("count formulas");
  }

  // complex property
  t0 = clock::now();
  {
    const auto r = complex_residuals(cx.inc);
    const bool ok = r.curl_grad <= opt.tol && r.div_curl <= opt.tol;
    rep["complex_property"] = {{"D1D0", r.curl_grad}, {"D2D1", r.div_curl}, {"passed", ok}};
    if (r.curl_grad > opt.tol)
      fail("complex property D1*D0: residual " + std::to_string(r.curl_grad));
    if (r.div_curl > opt.tol)
      fail("complex property D2*D1: residual " + std::to_string(r.div_curl));
  }
  stamp("complex_property", t0);

  // commutation
  t0 = clock::now();
  {
    const auto cr = verify_commutation(cx);
    json ids = json::array();
    for (const auto& id : cr.identities)
    {
      const bool ok = id.residual <= opt.tol;
      ids.push_back({{"name", id.name}, {"residual", id.residual}, {"passed", ok}});
      if (!ok)
      {
        std::ostringstream msg;
        msg << "commutation " << id.name << ": residual " << id.residual;
        fail(msg.str());
      }
    }
    rep["commutation"] = {{"identities", ids}, {"max_residual", cr.max_residual()}};
  }
  stamp("commutation", t0);

  // cohomology
  t0 = clock::now();
  {
    RankPolicy policy = opt.rank;
    if (cfg.rank_tolerance && !policy.tolerance)
      policy.tolerance = cfg.rank_tolerance;
    std::array<std::future<RankInfo>, 3> jobs;
    const SparseMatrix* mats[3] = {&cx.inc.D0, &cx.inc.D1, &cx.inc.D2};
    std::array<RankInfo, 3> ranks;
    if (threads > 1)
    {
      for (int d = 0; d < 3; ++d)
        jobs[d] = std::async(std::launch::async,
                             [&, d] { return numerical_rank(*mats[d], policy); });
      for (int d = 0; d < 3; ++d)
        ranks[d] = jobs[d].get();
    }
    else
      for (int d = 0; d < 3; ++d)
        ranks[d] = numerical_rank(*mats[d], policy);
    const int r0 = ranks[0].rank, r1 = ranks[1].rank, r2 = ranks[2].rank;
    const std::array<int, 4> dims{c.n0 - r0, c.n1 - r1 - r0, c.n2 - r2 - r1, c.n3 - r2};
    const int r1_expected = n.t * (c.nbar2 + c.nbar0 - 1);
    json rj = json::array({rank_json("D0", ranks[0]), rank_json("D1", ranks[1]),
                           rank_json("D2", ranks[2])});
    for (auto& x : rj)
      x["gap_ratio"] = finite_or(x["gap_ratio"].get<double>(), 1e300);
    json warnings = json::array();
    for (int d = 0; d < 3; ++d)
      if (ranks[d].gap_ratio < policy.warn_gap)
        warnings.push_back("D" + std::to_string(d) + ": ill-conditioned rank decision");
    const bool ok = dims == std::array<int, 4>{1, 1, 0, 0} && r1 == r1_expected && r2 == c.n3;
    rep["cohomology"] = {{"dims", dims},
                         {"expected", {1, 1, 0, 0}},
                         {"ranks", rj},
                         {"expected_rank_D1", r1_expected},
                         {"euler", dims[0] - dims[1] + dims[2] - dims[3]},
                         {"warnings", warnings},
                         {"passed", ok}};
    if (!ok)
    {
      std::ostringstream msg;
      msg << "cohomology dims (" << dims[0] << "," << dims[1] << "," << dims[2] << ","
          << dims[3] << "), rank D1 " << r1 << " (expected " << r1_expected << "), rank D2 "
          << r2 << " (expected " << c.n3 << ")";
      fail(msg.str());
    }
  }
  stamp("cohomology", t0);

  // DTA compatibility and independence
  t0 = clock::now();
  {
    json dta;
    auto dta_one = [&](const char* name, const SparseMatrix& M) {
      const auto d = is_dta_compatible(M, opt.tol);
      dta[name] = {{"compatible", d.compatible},
                   {"rank", d.rank},
                   {"max_column_sum_error", d.max_column_sum_error},
                   {"min_entry", d.min_entry},
                   {"max_row_nonzeros", d.max_row_nonzeros},
                   {"violations", d.violations}};
      if (!d.compatible)
        fail(std::string("DTA compatibility of ") + name);
    };
    dta_one("E000", cx.ext.E000);
    dta_one("H0_r", cx.seq.sr().H0());
    dta_one("H0_t", cx.seq.st().H0());
    rep["dta"] = dta;

    json ind;
    const std::pair<const char*, const SparseMatrix*> per[]
        = {{"E100", &cx.ext.E100}, {"E010", &cx.ext.E010}, {"E001", &cx.ext.E001},
           {"E011", &cx.ext.E011}, {"E101", &cx.ext.E101}, {"E110", &cx.ext.E110}};
    for (const auto& [name, M] : per)
    {
      const int nz = nonzero_row_count(*M), rk = dense_rank(*M);
      ind[name] = {{"nonzero_rows", nz}, {"rank", rk}};
      if (nz != rk)
        fail(std::string("nonzero rows of ") + name + " are dependent");
    }
    const SparseMatrix L1 = hstack<double>({cx.ext.E100, cx.ext.E010, cx.ext.E001});
    const SparseMatrix L2 = hstack<double>({cx.ext.E011, cx.ext.E101, cx.ext.E110});
    const int k1 = dense_rank(L1), k2 = dense_rank(L2);
    ind["level1_stacked_rank"] = k1;
    ind["level2_stacked_rank"] = k2;
    if (k1 != c.n1)
      fail("level-1 reduced basis is not linearly independent");
    if (k2 != c.n2)
      fail("level-2 reduced basis is not linearly independent");
    rep["independence"] = ind;
  }
  stamp("dta_independence", t0);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double R = cx.seq.sr().length(), S = cx.seq.ss().length(), T = cx.seq.st().length();

  // partition of unity
  t0 = clock::now();
  {
    double err = 0, min_val = 1;
    for (int q = 0; q < 200; ++q)
    {
      const double r = R * U(rng), s = S * U(rng), t = T * U(rng);
      const Eigen::VectorXd N = reduced_basis_all(cx.seq, cx.ext, 0, r, s, t);
      err = std::max(err, std::abs(N.sum() - 1.0));
      min_val = std::min(min_val, N.minCoeff());
    }
    const bool ok = err <= opt.tol && min_val >= -opt.tol;
    rep["partition_of_unity"]
        = {{"points", 200}, {"max_error", err}, {"min_value", min_val}, {"passed", ok}};
    if (!ok)
      fail("partition of unity: max error " + std::to_string(err));
  }
  stamp("partition_of_unity", t0);

  // smoothness probe over every V0 basis function
  t0 = clock::now();
  {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const std::vector<double> ts{0.3 * T, 0.8 * T};
    const ControlNet& P = cx.F.points;
    const int jobs = c.n0 * static_cast<int>(ts.size());
    std::vector<SmoothnessProbe> probes(jobs);
    parallel_for(jobs, threads, [&](int q) {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(c.n0);
      f(q % c.n0) = 1.0;
      probes[q] = polar_smoothness_probe(cx.seq, cx.ext, P, f, ts[q / c.n0], eps);
    });
    double vmax = 0;
    bool mono = true;
    std::vector<double> spread(eps.size(), 0.0);
    std::vector<int> non_monotone;
    for (int q = 0; q < jobs; ++q)
    {
      vmax = std::max(vmax, probes[q].value_discrepancy);
      if (!probes[q].c1_decreasing)
      {
        mono = false;
        non_monotone.push_back(q % c.n0 + 1);
      }
      for (std::size_t e = 0; e < eps.size(); ++e)
        spread[e] = std::max(spread[e], probes[q].rows[e].gradient_spread);
    }
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(cx.seq.level_dim(0));
    raw(0) = 1.0;
    const auto neg = polar_smoothness_probe_tensor(cx.seq, P, raw, ts[0], eps);
    const bool raw_fails = neg.value_discrepancy > 1e-3;
    const bool ok = vmax <= opt.tol && mono && raw_fails;
    rep["smoothness_probe"] = {{"functions", c.n0},
                               {"t_samples", ts},
                               {"r_samples", 8},
                               {"eps", eps},
                               {"max_value_discrepancy", vmax},
                               {"max_gradient_spread", spread},
                               {"c1_monotone", mono},
                               {"non_monotone_functions", non_monotone},
                               {"raw_control_value_discrepancy", neg.value_discrepancy},
                               {"passed", ok}};
    if (vmax > opt.tol)
      fail("polar-curve single-valuedness: discrepancy " + std::to_string(vmax));
    if (!mono)
      fail("C1 probe not decreasing in eps");
    if (!raw_fails)
      fail("raw tensor control did not register as multivalued");
  }
  stamp("smoothness_probe", t0);

  // divergence preimage
  t0 = clock::now();
  {
    double worst = 0;
    std::normal_distribution<double> G(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial)
    {
      Eigen::VectorXd m(c.n3);
      for (auto& v : m)
        v = G(rng);
      const Eigen::VectorXd h = divergence_preimage(cx, m);
      const double rel = (cx.inc.D2 * h - m).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();
      worst = std::max(worst, rel);
    }
    const bool ok = worst <= opt.tol;
    rep["divergence_preimage"] = {{"trials", 10}, {"max_relative_residual", worst}, {"passed", ok}};
    if (!ok)
      fail("divergence preimage residual " + std::to_string(worst));
  }
  stamp("divergence_preimage", t0);

  rep["timings_ms"] = timings;
  res.passed = res.failures.empty();
  rep["failures"] = res.failures;
  rep["passed"] = res.passed;
  return res;
}

void write_samples(std::ostream& os, const PolarComplex& cx, int level,
                   const Eigen::VectorXd& coeffs, const SampleGrid& grid)
{
  if (grid.nr < 1 || grid.ns < 1 || grid.nt < 1)
    throw ConfigError("grid counts must be positive");
  if (coeffs.size() != reduced_dim(cx.counts(), level))
  {
    std::ostringstream msg;
    msg << "level-" << level << " coefficients: expected " << reduced_dim(cx.counts(), level)
        << ", got " << coeffs.size();
    throw ConfigError(msg.str());
  }
  const auto& seq = cx.seq;
  const double floor = singularity_floor(seq);
  if (level > 0 && grid.s_start < floor)
  {
    std::ostringstream msg;
    msg << "grid starts at s = " << grid.s_start << ", below the singularity floor s_min = "
        << floor << " required for level " << level;
    throw SingularityError(msg.str(), floor);
  }
  auto lin = [](double a, double b, int n, int m) {
    return n == 1 ? a : a + (b - a) * m / (n - 1);
  };
  const int width = level == 0 || level == 3 ? 1 : 3;
  os << "r,s,t,x,y,z,v1";
  if (width == 3)
    os << ",v2,v3";
  os << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (int k = 0; k < grid.nt; ++k)
    for (int j = 0; j < grid.ns; ++j)
      for (int i = 0; i < grid.nr; ++i)
      {
        const double r = lin(seq.sr().a(), seq.sr().b(), grid.nr, i);
        const double s = lin(grid.s_start, seq.ss().b(), grid.ns, j);
        const double t = lin(seq.st().a(), seq.st().b(), grid.nt, k);
        const auto pv = pushforward_eval(cx, level, coeffs, r, s, t);
        put(r);
        for (double v : {s, t, pv.x(0), pv.x(1), pv.x(2)})
        {
          os << ',';
          put(v);
        }
        for (Eigen::Index m = 0; m < pv.value.size(); ++m)
        {
          os << ',';
          put(pv.value(m));
        }
        os << '\n';
      }
}

Eigen::VectorXd read_coefficients(std::istream& is)
{
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::vector<double> v;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[')
  {
    try
    {
      v = json::parse(text).get<std::vector<double>>();
    }
    catch (const json::exception& e)
    {
      throw ConfigError(std::string("coefficient file: ") + e.what());
    }
  }
  else
  {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok)
    {
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ConfigError("coefficient file: cannot parse '" + tok + "'");
      v.push_back(x);
    }
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Triple parse_triple(const std::string& s)
{
  Triple t;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> t.r >> c1 >> t.s >> c2 >> t.t) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    throw ConfigError("expected three comma-separated integers, got '" + s + "'");
  return t;
}

} // namespace polar_derham
