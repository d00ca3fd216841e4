// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
// Prints one PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <polar_derham/complex.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace polar_derham;

namespace
{

struct Outcome
{
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what)
  {
    if (!cond && ok)
      detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

const std::vector<Triple> kSizes{{4, 4, 3}, {5, 5, 4}, {6, 4, 5}, {5, 8, 3}};
const std::vector<Triple> kDegrees{{2, 2, 2}, {3, 2, 3}};

std::string label(Triple n, Triple p)
{
  std::ostringstream os;
  os << "n=(" << n.r << "," << n.s << "," << n.t << ") p=(" << p.r << "," << p.s << "," << p.t
     << ")";
  return os.str();
}

std::vector<PolarComplex> grid_complexes()
{
  std::vector<PolarComplex> out;
  for (auto p : kDegrees)
    for (auto n : kSizes)
    {
      TorusComplexSpec spec;
      spec.sizes = n;
      spec.degrees = p;
      out.push_back(build_complex(spec));
    }
  return out;
}

void cohomology(Outcome& o, const std::vector<PolarComplex>& grid, double elapsed_build)
{
  const auto t0 = std::chrono::steady_clock::now();
  double worst_gap = 1e300;
  for (const auto& cx : grid)
  {
    const auto rep = cohomology_dimensions(cx);
    const auto& c = cx.counts();
    const auto n = cx.sizes();
    const auto name = label(n, cx.seq.degrees());
    o.require(rep.dims == std::array<int, 4>{1, 1, 0, 0}, "dims " + name);
    o.require(rep.ranks[1].rank == n.t * (c.nbar2 + c.nbar0 - 1), "rank D1 " + name);
    o.require(rep.ranks[2].rank == c.n3, "rank D2 " + name);
    for (const auto& r : rep.ranks)
    {
      worst_gap = std::min(worst_gap, r.gap_ratio);
      o.require(r.gap_ratio >= 1e6, "gap ratio " + name);
    }
  }
  const double secs
      = elapsed_build
        + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 30.0, "runtime");
  o.detail << grid.size() << " complexes, dims (1,1,0,0), min gap " << worst_gap << ", "
           << secs << " s";
}

void complex_property(Outcome& o, const std::vector<PolarComplex>& grid)
{
  double worst = 0;
  for (const auto& cx : grid)
  {
    const auto r = complex_residuals(cx.inc);
    worst = std::max({worst, r.curl_grad, r.div_curl});
  }
  o.require(worst <= 1e-12, "residual");
  o.detail << "max |D1 D0|, |D2 D1| = " << worst;
}

void commutation(Outcome& o, const std::vector<PolarComplex>& grid)
{
  double worst = 0;
  for (const auto& cx : grid)
    worst = std::max(worst, verify_commutation(cx).max_residual());
  o.require(worst <= 1e-12, "identity residual");
  TorusComplexSpec bad;
  bad.ebar_perturbation = 1e-3;
  const double control = verify_commutation(build_complex(bad)).max_residual();
  o.require(control > 1e-4, "perturbed control");
  o.detail << "max residual " << worst << ", perturbed control " << control;
}

void counts(Outcome& o)
{
  std::mt19937_64 rng(20260415);
  std::uniform_int_distribution<int> R(3, 16), S(4, 16), T(3, 16);
  for (int trial = 0; trial < 20; ++trial)
  {
    const int nr = R(rng), ns = S(rng), nt = T(rng);
    TorusComplexSpec spec;
    spec.sizes = {nr, ns, nt};
    const auto cx = build_complex(spec);
    const auto& c = cx.counts();
    const std::string name = label(spec.sizes, spec.degrees);
    o.require(c.n0 == nt * (nr * (ns - 2) + 3), "n0 " + name);
    o.require(c.n1 == nt * (3 * nr * (ns - 2) + 5), "n1 " + name);
    o.require(c.n2 == nt * (c.nbar1 + c.nbar2), "n2 " + name);
    o.require(c.n3 == nt * c.nbar2, "n3 " + name);
    o.require(c.n0 - c.n1 + c.n2 - c.n3 == 0, "euler " + name);
    o.require(cx.inc.D0.cols() == c.n0 && cx.inc.D0.rows() == c.n1
                  && cx.inc.D1.rows() == c.n2 && cx.inc.D2.rows() == c.n3,
              "operator shapes " + name);
  }
  o.detail << "20 random size triples";
}

void dta(Outcome& o, const std::vector<PolarComplex>& grid)
{
  int checked = 0;
  for (const auto& cx : grid)
  {
    const auto name = label(cx.sizes(), cx.seq.degrees());
    o.require(is_dta_compatible(cx.ext.E000).compatible, "E000 " + name);
    o.require(is_dta_compatible(cx.seq.sr().H0()).compatible, "H0 r " + name);
    o.require(is_dta_compatible(cx.seq.st().H0()).compatible, "H0 t " + name);
    const auto& X = cx.ext;
    for (const SparseMatrix* M :
         {&X.E100, &X.E010, &X.E001, &X.E011, &X.E101, &X.E110, &X.E111})
    {
      o.require(dense_rank(*M) == nonzero_row_count(*M), "row independence " + name);
      ++checked;
    }
  }
  o.detail << "E000, H0 (r, t) compatible; " << checked << " nonzero-row rank checks";
}

void regularity(Outcome& o)
{
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  double worst_value = 0, min_control = 1e300;
  int functions = 0;
  for (auto [n, p] : {std::pair{Triple{4, 4, 3}, Triple{2, 2, 2}},
                      std::pair{Triple{5, 5, 4}, Triple{3, 2, 3}}})
  {
    TorusComplexSpec spec;
    spec.sizes = n;
    spec.degrees = p;
    const auto cx = build_complex(spec);
    const double T = cx.seq.st().length();
    for (int l = 0; l < cx.counts().n0; ++l)
    {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(cx.counts().n0, l);
      for (double t : {0.3 * T, 0.8 * T})
      {
        const auto probe = polar_smoothness_probe(cx, e, t, eps);
        worst_value = std::max(worst_value, probe.value_discrepancy);
        o.require(probe.value_discrepancy <= 1e-12, "single-valued " + label(n, p));
        o.require(probe.c1_decreasing, "C1 probe monotone " + label(n, p));
      }
      ++functions;
    }
    // raw tensor functions touching the first ring are not single-valued
    const VecIndexMap idx(n.r, n.s, n.t);
    double control = 0;
    for (int i = 1; i <= n.r; ++i)
    {
      const Eigen::VectorXd raw = Eigen::VectorXd::Unit(idx.size(), idx.offset(i, 1, 1));
      control = std::max(
          control,
          polar_smoothness_probe_tensor(cx.seq, cx.F.points, raw, 0.0, eps).value_discrepancy);
    }
    min_control = std::min(min_control, control);
    o.require(control > 1e-12, "raw tensor control " + label(n, p));
  }
  o.detail << functions << " V0 functions, max value spread " << worst_value
           << ", raw tensor spread " << min_control;
}

void divergence(Outcome& o)
{
  const auto cx = build_complex({});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial)
  {
    Eigen::VectorXd m(cx.counts().n3);
    for (auto& v : m)
      v = N(rng);
    const Eigen::VectorXd h = divergence_preimage(cx, m);
    const double rel = (cx.inc.D2 * h - m).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();
    worst = std::max(worst, rel);
  }
  o.require(worst <= 1e-12, "preimage residual");
  o.detail << "10 trials, max relative residual " << worst;
}

void derivative(Outcome& o)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N;
  const double h = 1e-5;
  double worst = 0;
  int spaces = 0;
  for (int p : {2, 3})
    for (bool periodic : {true, false})
      for (bool uniform : {true, false})
      {
        std::vector<double> knots(p + 1, 0.0);
        const int inner = 6;
        for (int k = 1; k <= inner; ++k)
          knots.push_back(uniform ? double(k) / (inner + 1)
                                  : std::pow(double(k) / (inner + 1), 1.4));
        knots.insert(knots.end(), p + 1, 1.0);
        const SplineSpace V(KnotVector(p, knots), periodic);
        Eigen::VectorXd c(V.dim());
        for (auto& v : c)
          v = N(rng);
        int taken = 0;
        while (taken < 100)
        {
          const double x = 2 * h + (1 - 4 * h) * U(rng);
          bool near_knot = false;
          for (double k : knots)
            near_knot = near_knot || std::abs(x - k) < 2 * h;
          if (near_knot)
            continue;
          const double d = V.eval_derivative(c, x);
          const double fd = (V.eval(c, x + h) - V.eval(c, x - h)) / (2 * h);
          const double rel = std::abs(d - fd) / std::max(std::abs(d), 1.0);
          worst = std::max(worst, rel);
          ++taken;
        }
        ++spaces;
      }
  o.require(worst <= 1e-6, "relative error");
  o.detail << spaces << " spaces x 100 points, max relative error " << worst;
}

void partition(Outcome& o)
{
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0;
  for (auto p : kDegrees)
  {
    TorusComplexSpec spec;
    spec.degrees = p;
    spec.sizes = {5, 5, 4};
    const auto cx = build_complex(spec);
    for (int q = 0; q < 200; ++q)
    {
      const Eigen::VectorXd N
          = reduced_basis_all(cx.seq, cx.ext, 0, U(rng), U(rng), U(rng));
      worst = std::max(worst, std::abs(N.sum() - 1.0));
      o.require(N.minCoeff() >= -1e-12, "nonnegative");
    }
  }
  o.require(worst <= 1e-12, "sum");
  o.detail << "2 x 200 points, max |sum - 1| = " << worst;
}

} // namespace

int main()
{
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try
    {
      body(o);
    }
    catch (const std::exception& e)
    {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %d %s: %s\n", o.ok ? "PASS" : "FAIL", id, name,
                o.detail.str().c_str());
    failed += !o.ok;
  };

  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = grid_complexes();
  const double build_secs
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report(1, "cohomology", [&](Outcome& o) { cohomology(o, grid, build_secs); });
  report(2, "complex-property", [&](Outcome& o) { complex_property(o, grid); });
  report(3, "commutation", [&](Outcome& o) { commutation(o, grid); });
  report(4, "count-formulas", counts);
  report(5, "dta-compatibility", [&](Outcome& o) { dta(o, grid); });
  report(6, "polar-regularity", regularity);
  report(7, "divergence-surjectivity", divergence);
  report(8, "derivative-formula", derivative);
  report(9, "partition-of-unity", partition);
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
