// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <numbers>
#include <polar_derham/errors.hpp>
#include <polar_derham/polar_extraction.hpp>
#include <random>

using namespace polar_derham;

TEST_CASE("Ebar block")
{
  const auto E = ebar_block(4);
  CHECK(E.theta()[0] == doctest::Approx(7 * std::numbers::pi / 4));
  CHECK(E(1, 1, 2) == doctest::Approx(1.0 / 3 + std::sqrt(2.0) / 6));
  CHECK(E(1, 1, 2) == doctest::Approx(0.56904).epsilon(1e-5));
  for (int nr = 3; nr <= 12; ++nr)
  {
    const auto B = ebar_block(nr);
    for (int c = 0; c < 2 * nr; ++c)
      CHECK(B.matrix().col(c).sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(B.matrix().minCoeff() >= -1e-15);
    for (int i = 1; i <= nr; ++i)
      for (int l = 1; l <= 3; ++l)
        CHECK(B(l, i, 1) == doctest::Approx(1.0 / 3));
    for (double th : B.theta())
    {
      CHECK(th >= 0.0);
      CHECK(th < 2 * std::numbers::pi);
    }
  }
  CHECK(E(2, 5, 2) == E(2, 1, 2));
  CHECK_THROWS_AS(ebar_block(2), ConstructionError);
  CHECK(E.perturbed(1, 1, 2, 1e-3)(1, 1, 2) == doctest::Approx(E(1, 1, 2) + 1e-3));
}

TEST_CASE("E0")
{
  const auto E = ebar_block(4);
  const SparseMatrix E0 = extraction_E0(E, 4);
  CHECK(E0.rows() == 11);
  CHECK(E0.cols() == 16);
  CHECK(is_dta_compatible(E0).compatible);
  for (int row = 3; row < 11; ++row)
  {
    CHECK(E0.row(row).nonZeros() == 1);
    CHECK(E0.row(row).sum() == 1.0);
  }
  CHECK_THROWS_AS(extraction_E0(E, 3), ConstructionError);
}

TEST_CASE("E10 and E01 agree with their closed forms")
{
  for (auto [nr, ns] : {std::pair{4, 4}, std::pair{5, 6}, std::pair{3, 5}})
  {
    const auto E = ebar_block(nr);
    const auto c = polar_counts(nr, ns, 1);
    Eigen::MatrixXd ref10 = Eigen::MatrixXd::Zero(c.nbar1, nr * ns);
    Eigen::MatrixXd ref01 = Eigen::MatrixXd::Zero(c.nbar1, nr * (ns - 1));
    for (int l = 1; l <= 2; ++l)
      for (int i = 1; i <= nr; ++i)
      {
        ref10(l - 1, nr + i - 1) = E(l + 1, i + 1, 2) - E(l + 1, i, 2);
        ref01(l - 1, i - 1) = E(l + 1, i, 2) - 1.0 / 3.0;
      }
    for (int j = 3; j <= ns; ++j)
      for (int i = 1; i <= nr; ++i)
        ref10(1 + i + (2 * j - 5) * nr, i - 1 + (j - 1) * nr) = 1;
    for (int j = 2; j <= ns - 1; ++j)
      for (int i = 1; i <= nr; ++i)
        ref01(1 + i + (2 * j - 4) * nr, i - 1 + (j - 1) * nr) = 1;
    CHECK((Eigen::MatrixXd(extraction_E10(E, ns)) - ref10).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((Eigen::MatrixXd(extraction_E01(E, ns)) - ref01).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("E10 and E01 structure")
{
  const int nr = 4, ns = 5;
  const auto E = ebar_block(nr);
  const Eigen::MatrixXd E10(extraction_E10(E, ns)), E01(extraction_E01(E, ns));
  CHECK(E10.rows() == 2 * (nr * (ns - 2) + 1));
  // rows 1-2 live on the second ring
  for (int l = 0; l < 2; ++l)
  {
    CHECK(E10.row(l).head(nr).cwiseAbs().maxCoeff() == 0.0);
    CHECK(E10.row(l).tail(nr * (ns - 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(E10.row(l).segment(nr, nr).cwiseAbs().maxCoeff() > 0.0);
    CHECK(std::abs(E01.row(l).head(nr).sum()) < 1e-15);
  }
  for (int j = 3; j <= ns; ++j)
    for (int i = 1; i <= nr; ++i)
      CHECK(E10.row(1 + i + (2 * j - 6) * nr).cwiseAbs().maxCoeff() == 0.0);
  for (int j = 2; j <= ns - 1; ++j)
    for (int i = 1; i <= nr; ++i)
      CHECK(E01.row(1 + i + (2 * j - 3) * nr).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(apply_E10(E, ns, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("E2 selector")
{
  const Eigen::MatrixXd E2(extraction_E2(4, 4));
  CHECK(E2.rows() == 8);
  CHECK(E2.cols() == 12);
  for (int l = 0; l < 8; ++l)
    CHECK(E2(l, l + 4) == 1.0);
  CHECK(E2.sum() == 8.0);
  CHECK(dense_rank(extraction_E2(4, 4)) == 8);
  Eigen::RowVectorXd cs = E2.colwise().sum();
  CHECK(cs.head(4).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cs.tail(8).array() - 1.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("count formulas")
{
  const auto c = polar_counts(4, 4, 3);
  CHECK(c.nbar0 == 11);
  CHECK(c.nbar1 == 18);
  CHECK(c.nbar2 == 8);
  CHECK(c.n0 == 33);
  CHECK(c.n1 == 87);
  CHECK(c.n2 == 78);
  CHECK(c.n3 == 24);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> R(3, 12), S(4, 12);
  for (int trial = 0; trial < 50; ++trial)
  {
    const int nr = R(rng), ns = S(rng), nt = R(rng);
    const auto k = polar_counts(nr, ns, nt);
    CHECK(k.n0 == nt * (nr * (ns - 2) + 3));
    CHECK(k.n1 == nt * (3 * nr * (ns - 2) + 5));
    CHECK(k.n0 - k.n1 + k.n2 - k.n3 == 0);
  }
}

TEST_CASE("3D assemblies")
{
  const auto E = ebar_block(4);
  const auto X = assemble_3d(E, 4, 3);
  const auto& c = X.counts;
  CHECK(X.E000.rows() == 33);
  CHECK(X.E000.cols() == 48);
  CHECK(X.E100.rows() == c.n1);
  CHECK(X.E100.cols() == 48);
  CHECK(X.E010.cols() == 36);
  CHECK(X.E011.rows() == c.n2);
  CHECK(X.E011.cols() == 36);
  CHECK(X.E101.cols() == 48);
  CHECK(X.E110.cols() == 36);
  CHECK(X.E111.rows() == c.n3);
  CHECK(X.E111.cols() == 36);

  const Eigen::MatrixXd E001(X.E001), E0(X.E0), E101(X.E101), E10(X.E10);
  for (int k = 0; k < 3; ++k)
  {
    const int r0 = k * (c.nbar0 + c.nbar1);
    CHECK(E001.block(r0, 0, c.nbar1, 48).cwiseAbs().maxCoeff() == 0.0);
    CHECK((E001.block(r0 + c.nbar1, k * 16, c.nbar0, 16) - E0).cwiseAbs().maxCoeff() == 0.0);
    const int r2 = k * (c.nbar2 + c.nbar1);
    CHECK((E101.block(r2 + c.nbar2, k * 16, c.nbar1, 16) + E10).cwiseAbs().maxCoeff() == 0.0);
  }

  auto check_nondegenerate = [](const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix& C) {
    const SparseMatrix S = hstack<double>({A, B, C});
    for (int l = 0; l < S.rows(); ++l)
      CHECK(S.row(l).nonZeros() > 0);
  };
  check_nondegenerate(X.E100, X.E010, X.E001);
  check_nondegenerate(X.E011, X.E101, X.E110);
  CHECK(is_dta_compatible(X.E000).compatible);
}

TEST_CASE("nonzero rows are independent")
{
  for (auto [nr, ns, nt] : {std::tuple{4, 4, 3}, std::tuple{5, 6, 4}})
  {
    const auto X = assemble_3d(ebar_block(nr), ns, nt);
    for (const SparseMatrix* M : {&X.E100, &X.E010, &X.E001, &X.E011, &X.E101, &X.E110, &X.E111})
      CHECK(dense_rank(*M) == nonzero_row_count(*M));
    CHECK(dense_rank(hstack<double>({X.E100, X.E010, X.E001})) == X.counts.n1);
    CHECK(dense_rank(hstack<double>({X.E011, X.E101, X.E110})) == X.counts.n2);
  }
}

TEST_CASE("reduced basis evaluation")
{
  const auto seq = build_tensor_sequence({2, 2, 2}, {4, 4, 3});
  const auto X = assemble_3d(ebar_block(4), 4, 3);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int q = 0; q < 50; ++q)
  {
    const double r = U(rng), s = U(rng), t = U(rng);
    const Eigen::VectorXd N = reduced_basis_all(seq, X, 0, r, s, t);
    CHECK(std::abs(N.sum() - 1.0) < 1e-12);
    CHECK(N.minCoeff() >= -1e-15);
    const int l = 1 + q % X.counts.n0;
    CHECK(reduced_basis_eval(seq, X, 0, l, r, s, t)(0) == doctest::Approx(N(l - 1)));
  }

  // toroidal edge rows of E100 are zero, so the first component vanishes
  const int l = X.counts.nbar1 + 1;
  CHECK(X.E100.row(l - 1).nonZeros() == 0);
  const Eigen::VectorXd v = reduced_basis_eval(seq, X, 1, l, 0.4, 0.5, 0.6);
  CHECK(v.size() == 3);
  CHECK(v(0) == 0.0);
  CHECK(v(2) != 0.0);

  CHECK_THROWS_AS(reduced_basis_eval(seq, X, 2, 0, 0.1, 0.1, 0.1), std::out_of_range);
  CHECK_THROWS_AS(reduced_basis_eval(seq, X, 3, X.counts.n3 + 1, 0.1, 0.1, 0.1),
                  std::out_of_range);

  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(X.counts.n2, -1.0, 1.0);
  const Eigen::VectorXd tc = to_tensor_coeffs(X, 2, x);
  CHECK(tc.size() == seq.level_dim(2));
  const Eigen::VectorXd val = reduced_field_eval(seq, X, 2, x, 0.2, 0.7, 0.9);
  const auto off = seq.component_offsets(2);
  const auto comps = level_components(2);
  for (int m = 0; m < 3; ++m)
    CHECK(val(m) == doctest::Approx(seq.eval_component(
                        comps[m], tc.segment(off[m], seq.component_dim(comps[m])), 0.2, 0.7, 0.9)));
}
