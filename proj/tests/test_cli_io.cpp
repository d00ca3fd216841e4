// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <fstream>
#include <polar_derham/cli_io.hpp>
#include <polar_derham/errors.hpp>
#include <random>
#include <sstream>

using namespace polar_derham;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::path(POLAR_DERHAM_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines_of(const std::string& text)
{
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);)
    out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("config parsing")
{
  const auto def = parse_config(json::object());
  CHECK(def.spec.degrees == Triple{2, 2, 2});
  CHECK(def.spec.sizes == Triple{4, 4, 3});
  CHECK(def.spec.rho_bar == 3.0);
  CHECK(def.defaulted.size() == 4);
  CHECK_FALSE(def.rank_tolerance);

  const auto dk = parse_config(json{{"degrees", {3, 2, 3}}, {"distinct_knots", {3, 4, 3}}});
  CHECK(dk.spec.sizes == Triple{3, 5, 3});
  CHECK(build_sequence(dk.spec).sizes() == Triple{3, 5, 3});

  const auto kn = parse_config(json{{"knots",
                                     {{"r", {0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1}},
                                      {"s", {0, 0, 0, 0.3, 0.6, 1, 1, 1}},
                                      {"t", {0, 0, 0, 0.4, 0.7, 1, 1, 1}}}}});
  const auto seq = build_sequence(kn.spec);
  CHECK(seq.sizes() == Triple{4, 5, 3});

  const auto round = parse_config(config_to_json(dk));
  CHECK(round.spec.sizes == dk.spec.sizes);
  CHECK(round.spec.degrees == dk.spec.degrees);

  CHECK_THROWS_AS(parse_config(json{{"rho_bar", 2.0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"degrees", {1, 2, 2}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"sizes", {4, 4}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"sizes", {4, 4, 3}}, {"distinct_knots", {3, 3, 3}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"rank_tolerance", -1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(build_complex(parse_config(json{{"sizes", {4, 3, 3}}}).spec),
                  ConstructionError);
}

TEST_CASE("triplet round trip is bit exact")
{
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < 40; ++i)
    trip.emplace_back(i % 7, (i * 5) % 11, N(rng) * std::pow(10.0, i % 9 - 4));
  SparseMatrix M(7, 11);
  M.setFromTriplets(trip.begin(), trip.end());
  std::stringstream ss;
  write_triplets(ss, M);
  const SparseMatrix back = read_triplets(ss);
  CHECK(back.rows() == 7);
  CHECK(back.cols() == 11);
  CHECK((Eigen::MatrixXd(back) - Eigen::MatrixXd(M)).cwiseAbs().maxCoeff() == 0.0);

  std::stringstream bad("3 3 2\n1 1 1.0\n");
  CHECK_THROWS(read_triplets(bad));
}

TEST_CASE("bundle and export")
{
  const auto cfg = parse_config(json::object());
  const auto cx = build_complex(cfg.spec);
  const fs::path dir = scratch("bundle");
  write_bundle(cx, cfg, dir);
  for (const char* f : {"config.json", "dimensions.json", "control_nets.json"})
    CHECK(fs::exists(dir / f));
  const auto back = load_bundle_config(dir);
  CHECK(back.spec.sizes == cfg.spec.sizes);

  std::ifstream dims(dir / "dimensions.json");
  const json d = json::parse(dims);
  CHECK(d.dump().find("87") != std::string::npos);

  const SparseMatrix D0 = read_triplets(dir / "matrices" / "D0.txt");
  CHECK(D0.rows() == 87);
  CHECK((Eigen::MatrixXd(D0) - Eigen::MatrixXd(cx.inc.D0)).cwiseAbs().maxCoeff() == 0.0);

  const SparseMatrix E111 = read_triplets(dir / "matrices" / "E111.txt");
  for (int k = 0; k < E111.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(E111, k); it; ++it)
      CHECK((it.value() == 0.0 || it.value() == 1.0));

  const auto only = export_matrices(cx, {"D0"}, scratch("export_one"));
  REQUIRE(only.size() == 1);
  std::ifstream head(only[0]);
  int rows = 0, cols = 0, nnz = 0;
  head >> rows >> cols >> nnz;
  CHECK(rows == 87);
  CHECK(cols == 33);
  CHECK(nnz == cx.inc.D0.nonZeros());

  CHECK(export_matrices(cx, {"ALL"}, scratch("export_all")).size() >= 14);
  try
  {
    export_matrices(cx, {"D9"}, scratch("export_bad"));
    FAIL("expected ConfigError");
  }
  catch (const ConfigError& e)
  {
    CHECK(std::string(e.what()).find("E000") != std::string::npos);
  }
}

TEST_CASE("verification report")
{
  const auto cfg = parse_config(json::object());
  VerifyOptions opt;
  opt.threads = 2;
  auto a = run_verification(cfg, opt);
  auto b = run_verification(cfg, opt);
  CHECK(a.passed);
  CHECK(a.failures.empty());
  CHECK(a.report["cohomology"]["dims"] == json({1, 1, 0, 0}));
  a.report.erase("timings_ms");
  b.report.erase("timings_ms");
  CHECK(a.report == b.report);

  VerifyOptions drop = opt;
  drop.drop_row = std::pair<std::string, int>{"D1", 5};
  CHECK_FALSE(run_verification(cfg, drop).passed);

  auto bad = cfg;
  bad.spec.ebar_perturbation = 1e-3;
  const auto r = run_verification(bad, opt);
  CHECK_FALSE(r.passed);
  CHECK(r.report["commutation"]["max_residual"].get<double>() > 1e-4);

  drop.drop_row = std::pair<std::string, int>{"Q7", 1};
  CHECK_THROWS_AS(run_verification(cfg, drop), ConfigError);
}

TEST_CASE("sampling")
{
  const auto cx = build_complex({});
  const auto& c = cx.counts();
  std::ostringstream os;
  write_samples(os, cx, 0, Eigen::VectorXd::LinSpaced(c.n0, 0.0, 1.0), {5, 5, 5, 0.0});
  auto rows = lines_of(os.str());
  REQUIRE(rows.size() == 126);
  CHECK(rows[0] == "r,s,t,x,y,z,v1");
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    std::istringstream ls(rows[i]);
    std::vector<double> v;
    for (std::string cell; std::getline(ls, cell, ',');)
      v.push_back(std::stod(cell));
    REQUIRE(v.size() == 7);
    CHECK(v[6] >= -1e-12);
    CHECK(v[6] <= 1 + 1e-12);
  }

  std::ostringstream sum;
  write_samples(sum, cx, 0, Eigen::VectorXd::Ones(c.n0), {3, 4, 2, 0.0});
  rows = lines_of(sum.str());
  CHECK(rows.size() == 25);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::stod(rows[i].substr(rows[i].rfind(',') + 1)) == doctest::Approx(1.0));

  std::ostringstream vec;
  write_samples(vec, cx, 2, Eigen::VectorXd::Ones(c.n2), {2, 2, 2, 0.1});
  CHECK(lines_of(vec.str())[0] == "r,s,t,x,y,z,v1,v2,v3");

  std::ostringstream sink;
  CHECK_THROWS_AS(write_samples(sink, cx, 3, Eigen::VectorXd::Ones(c.n3), {2, 2, 2, 0.0}),
                  SingularityError);
  CHECK_THROWS_AS(write_samples(sink, cx, 0, Eigen::VectorXd::Ones(3), {2, 2, 2, 0.0}),
                  ConfigError);
}

TEST_CASE("small parsers")
{
  std::istringstream a("[1, 2.5, -3]");
  CHECK(read_coefficients(a).isApprox(Eigen::Vector3d(1, 2.5, -3)));
  std::istringstream b("1 2\n3e-1");
  CHECK(read_coefficients(b).isApprox(Eigen::Vector3d(1, 2, 0.3)));
  std::istringstream c("1 x");
  CHECK_THROWS(read_coefficients(c));
  CHECK(parse_triple("5,6,4") == Triple{5, 6, 4});
  CHECK_THROWS_AS(parse_triple("5,6"), ConfigError);
  CHECK_THROWS_AS(parse_triple("a,b,c"), ConfigError);
}
