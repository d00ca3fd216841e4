// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/incidence.hpp"
#include "polar_derham/errors.hpp"
#include <Eigen/SVD>
#include <Eigen/SparseQR>
#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace polar_derham
{

namespace
{

/// 1-based triplet collector.
struct Assembler
{
  std::vector<Eigen::Triplet<double>> trip;
  std::set<int> weighted;

  void add(int row, int col, double v) { trip.emplace_back(row - 1, col - 1, v); }
  void weigh(int row) { weighted.insert(row); }

  SparseMatrix finish(int rows, int cols)
  {
    SparseMatrix M(rows, cols);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
  }
};

/// Global numbering of the control ring objects per joint k (k wraps).
struct RingIndex
{
  int nr, ns, nt;
  PolarCounts c;

  RingIndex(int nr_, int ns_, int nt_) : nr(nr_), ns(ns_), nt(nt_), c(polar_counts(nr_, ns_, nt_))
  {
    check_polar_sizes(nr, ns, nt);
  }

  int k0(int k) const { return wrap(k, nt) - 1; }
  /// Vertex v of joint k.
  int vertex(int k, int v) const { return v + k0(k) * c.nbar0; }
  /// In-joint edge e of joint k.
  int joint_edge(int k, int e) const { return e + k0(k) * (c.nbar0 + c.nbar1); }
  /// Toroidal edge leaving vertex v of joint k.
  int tor_edge(int k, int v) const { return v + k0(k) * c.nbar0 + (k0(k) + 1) * c.nbar1; }
  /// In-joint face f of joint k.
  int joint_face(int k, int f) const { return f + k0(k) * (c.nbar2 + c.nbar1); }
  /// Side face spanned by edge e of joint k and the next joint.
  int side_face(int k, int e) const { return e + (k0(k) + 1) * c.nbar2 + k0(k) * c.nbar1; }
  /// Volume f between joints k and k+1.
  int volume(int k, int f) const { return f + k0(k) * c.nbar2; }
  int ip(int i) const { return wrap(i + 1, nr); }
};

} // namespace

SparseMatrix build_D0(int nr, int ns, int nt, const EbarBlock& ebar)
{
  return build_incidence(nr, ns, nt, ebar).D0;
}

SparseMatrix build_D1(int nr, int ns, int nt, const EbarBlock& ebar)
{
  return build_incidence(nr, ns, nt, ebar).D1;
}

SparseMatrix build_D2(int nr, int ns, int nt, const EbarBlock& ebar)
{
  return build_incidence(nr, ns, nt, ebar).D2;
}

namespace
{

SparseMatrix assemble_D0(const RingIndex& x, const EbarBlock& E, std::set<int>& weighted)
{
  const int nr = x.nr, ns = x.ns;
  Assembler a;
  for (int k = 1; k <= x.nt; ++k)
  {
    auto f = [&](int v) { return x.vertex(k, v); };
    auto g = [&](int e) { return x.joint_edge(k, e); };
    a.add(g(1), f(2), 1);
    a.add(g(1), f(1), -1);
    a.add(g(2), f(3), 1);
    a.add(g(2), f(1), -1);
    for (int i = 1; i <= nr; ++i)
    {
      a.add(g(2 + i), f(3 + i), 1);
      for (int l = 1; l <= 3; ++l)
        a.add(g(2 + i), f(l), -E(l, i, 2));
      a.weigh(g(2 + i));
    }
    for (int j = 3; j <= ns - 1; ++j)
      for (int i = 1; i <= nr; ++i)
      {
        a.add(g(2 + i + (2 * j - 5) * nr), f(3 + x.ip(i) + (j - 3) * nr), 1);
        a.add(g(2 + i + (2 * j - 5) * nr), f(3 + i + (j - 3) * nr), -1);
        a.add(g(2 + i + (2 * j - 4) * nr), f(3 + i + (j - 2) * nr), 1);
        a.add(g(2 + i + (2 * j - 4) * nr), f(3 + i + (j - 3) * nr), -1);
      }
    for (int i = 1; i <= nr; ++i)
    {
      a.add(g(2 + i + (2 * ns - 5) * nr), f(3 + x.ip(i) + (ns - 3) * nr), 1);
      a.add(g(2 + i + (2 * ns - 5) * nr), f(3 + i + (ns - 3) * nr), -1);
    }
    for (int v = 1; v <= x.c.nbar0; ++v)
    {
      a.add(x.tor_edge(k, v), x.vertex(k + 1, v), 1);
      a.add(x.tor_edge(k, v), x.vertex(k, v), -1);
    }
  }
  weighted = a.weighted;
  return a.finish(x.c.n1, x.c.n0);
}

SparseMatrix assemble_D1(const RingIndex& x, const EbarBlock& E, std::set<int>& weighted)
{
  const int nr = x.nr, ns = x.ns;
  Assembler a;
  for (int k = 1; k <= x.nt; ++k)
  {
    auto g = [&](int e) { return x.joint_edge(k, e); };
    auto gn = [&](int e) { return x.joint_edge(k + 1, e); };
    auto T = [&](int v) { return x.tor_edge(k, v); };
    auto J = [&](int f) { return x.joint_face(k, f); };
    auto S = [&](int e) { return x.side_face(k, e); };

    for (int i = 1; i <= nr; ++i)
    {
      const int ip = x.ip(i);
      a.add(J(i), g(2 + ip), 1);
      a.add(J(i), g(2 + i), -1);
      a.add(J(i), g(2 + i + nr), -1);
      for (int l = 1; l <= 2; ++l)
        a.add(J(i), g(l), E(l + 1, ip, 2) - E(l + 1, i, 2));
      a.weigh(J(i));
    }
    for (int j = 2; j <= ns - 2; ++j)
      for (int i = 1; i <= nr; ++i)
      {
        const int row = J(i + (j - 1) * nr);
        a.add(row, g(2 + x.ip(i) + (2 * j - 2) * nr), 1);
        a.add(row, g(2 + i + (2 * j - 2) * nr), -1);
        a.add(row, g(2 + i + (2 * j - 1) * nr), -1);
        a.add(row, g(2 + i + (2 * j - 3) * nr), 1);
      }

    auto side = [&](int e, int v_plus, int v_minus) {
      a.add(S(e), gn(e), -1);
      a.add(S(e), g(e), 1);
      a.add(S(e), T(v_plus), 1);
      a.add(S(e), T(v_minus), -1);
    };
    side(1, 2, 1);
    side(2, 3, 1);
    for (int i = 1; i <= nr; ++i)
    {
      const int e = 2 + i;
      a.add(S(e), gn(e), -1);
      a.add(S(e), g(e), 1);
      a.add(S(e), T(3 + i), 1);
      for (int l = 1; l <= 3; ++l)
        a.add(S(e), T(l), -E(l, i, 2));
      a.weigh(S(e));
    }
    for (int j = 3; j <= ns - 1; ++j)
      for (int i = 1; i <= nr; ++i)
      {
        side(2 + i + (2 * j - 5) * nr, 3 + x.ip(i) + (j - 3) * nr, 3 + i + (j - 3) * nr);
        side(2 + i + (2 * j - 4) * nr, 3 + i + (j - 2) * nr, 3 + i + (j - 3) * nr);
      }
    for (int i = 1; i <= nr; ++i)
      side(2 + i + (2 * ns - 5) * nr, 3 + x.ip(i) + (ns - 3) * nr, 3 + i + (ns - 3) * nr);
  }
  weighted = a.weighted;
  return a.finish(x.c.n2, x.c.n1);
}

SparseMatrix assemble_D2(const RingIndex& x, const EbarBlock& E, std::set<int>& weighted)
{
  const int nr = x.nr, ns = x.ns;
  Assembler a;
  for (int k = 1; k <= x.nt; ++k)
  {
    auto S = [&](int e) { return x.side_face(k, e); };
    auto m = [&](int f) { return x.volume(k, f); };
    for (int i = 1; i <= nr; ++i)
    {
      const int ip = x.ip(i);
      a.add(m(i), S(2 + ip), 1);
      a.add(m(i), S(2 + i), -1);
      a.add(m(i), S(2 + i + nr), -1);
      for (int l = 1; l <= 2; ++l)
        a.add(m(i), S(l), E(l + 1, ip, 2) - E(l + 1, i, 2));
      a.add(m(i), x.joint_face(k + 1, i), 1);
      a.add(m(i), x.joint_face(k, i), -1);
      a.weigh(m(i));
    }
    for (int j = 2; j <= ns - 2; ++j)
      for (int i = 1; i <= nr; ++i)
      {
        const int f = i + (j - 1) * nr;
        a.add(m(f), S(2 + x.ip(i) + (2 * j - 2) * nr), 1);
        a.add(m(f), S(2 + i + (2 * j - 2) * nr), -1);
        a.add(m(f), S(2 + i + (2 * j - 1) * nr), -1);
        a.add(m(f), S(2 + i + (2 * j - 3) * nr), 1);
        a.add(m(f), x.joint_face(k + 1, f), 1);
        a.add(m(f), x.joint_face(k, f), -1);
      }
  }
  weighted = a.weighted;
  return a.finish(x.c.n3, x.c.n2);
}

} // namespace

IncidenceSet build_incidence(int nr, int ns, int nt, const EbarBlock& ebar)
{
  if (ebar.nr() != nr)
    throw ConstructionError("Ebar block was built for a different n^r");
  RingIndex x(nr, ns, nt);
  IncidenceSet inc;
  std::array<std::set<int>, 3> w;
  inc.D0 = assemble_D0(x, ebar, w[0]);
  inc.D1 = assemble_D1(x, ebar, w[1]);
  inc.D2 = assemble_D2(x, ebar, w[2]);
  for (int d = 0; d < 3; ++d)
    inc.weighted_rows[d].assign(w[d].begin(), w[d].end());
  return inc;
}

double CommutationReport::max_residual() const
{
  double m = 0;
  for (const auto& id : identities)
    m = std::max(m, id.residual);
  return m;
}

namespace
{
double residual(const SparseMatrix& lhs, const SparseMatrix& rhs, const std::string& name)
{
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
  {
    std::ostringstream msg;
    msg << "identity " << name << ": shape mismatch " << lhs.rows() << "x" << lhs.cols()
        << " vs " << rhs.rows() << "x" << rhs.cols();
    throw ConstructionError(msg.str());
  }
  SparseMatrix d = lhs - rhs;
  return max_abs(d);
}
} // namespace

CommutationReport verify_commutation(Triple n, const ExtractionSet& ext, const IncidenceSet& inc)
{
  const Triple full = n, red{n.r, n.s - 1, n.t};
  const SparseMatrix D100 = to_double(directional_difference(Direction::r, full));
  const SparseMatrix D100r = to_double(directional_difference(Direction::r, red));
  const SparseMatrix D010 = to_double(directional_difference(Direction::s, full));
  const SparseMatrix D001 = to_double(directional_difference(Direction::t, full));
  const SparseMatrix D001r = to_double(directional_difference(Direction::t, red));
  auto T = [](const SparseMatrix& M) { return SparseMatrix(M.transpose()); };
  const SparseMatrix E000t = T(ext.E000), E100t = T(ext.E100), E010t = T(ext.E010),
                     E001t = T(ext.E001), E011t = T(ext.E011), E101t = T(ext.E101),
                     E110t = T(ext.E110), E111t = T(ext.E111);

  CommutationReport rep;
  auto add = [&](const std::string& name, const SparseMatrix& l, const SparseMatrix& r) {
    rep.identities.push_back({name, residual(l, r, name)});
  };
  add("grad_r", D100 * E000t, E100t * inc.D0);
  add("grad_s", D010 * E000t, E010t * inc.D0);
  add("grad_t", D001 * E000t, E001t * inc.D0);
  add("curl_1", SparseMatrix(-(D001r * E010t) + D010 * E001t), E011t * inc.D1);
  add("curl_2", SparseMatrix(D001 * E100t - D100 * E001t), E101t * inc.D1);
  add("curl_3", SparseMatrix(-(D010 * E100t) + D100r * E010t), E110t * inc.D1);
  add("div", SparseMatrix(D100r * E011t + D010 * E101t + D001r * E110t), E111t * inc.D2);
  return rep;
}

ComplexResiduals complex_residuals(const IncidenceSet& inc)
{
  SparseMatrix a = inc.D1 * inc.D0;
  SparseMatrix b = inc.D2 * inc.D1;
  return {max_abs(a), max_abs(b)};
}

namespace
{
RankInfo rank_from_values(std::vector<double> s, int rows, int cols, const RankPolicy& policy)
{
  std::sort(s.begin(), s.end(), std::greater<>());
  RankInfo info;
  info.rows = rows;
  info.cols = cols;
  info.sigma_max = s.empty() ? 0.0 : s.front();
  info.threshold = policy.tolerance
                       ? *policy.tolerance
                       : std::max(rows, cols) * std::numeric_limits<double>::epsilon()
                             * info.sigma_max;
  int r = 0;
  while (r < static_cast<int>(s.size()) && s[r] > info.threshold)
    ++r;
  info.rank = r;
  info.sigma_kept = r > 0 ? s[r - 1] : 0.0;
  info.sigma_dropped = r < static_cast<int>(s.size()) ? s[r] : 0.0;
  const double floor = std::max(info.sigma_dropped, info.threshold);
  info.gap_ratio = r == 0 ? 0.0
                   : floor > 0 ? info.sigma_kept / floor
                               : std::numeric_limits<double>::infinity();
  return info;
}
} // namespace

RankInfo numerical_rank(const SparseMatrix& M, const RankPolicy& policy)
{
  const int rows = static_cast<int>(M.rows()), cols = static_cast<int>(M.cols());
  if (rows == 0 || cols == 0)
    return rank_from_values({}, rows, cols, policy);
  if (policy.method == RankPolicy::Method::sparse_qr)
  {
    using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;
    ColMajor A = rows >= cols ? ColMajor(M) : ColMajor(M.transpose());
    A.makeCompressed();
    double max_col = 0;
    for (int j = 0; j < A.outerSize(); ++j)
      max_col = std::max(max_col, A.col(j).norm());
    Eigen::SparseQR<ColMajor, Eigen::COLAMDOrdering<int>> qr;
    const double tau = policy.tolerance ? *policy.tolerance
                                        : 20.0 * (A.rows() + A.cols()) * max_col
                                              * std::numeric_limits<double>::epsilon();
    qr.setPivotThreshold(tau);
    qr.compute(A);
    if (qr.info() != Eigen::Success)
      throw std::runtime_error("sparse QR factorization failed");
    RankInfo info;
    info.rows = rows;
    info.cols = cols;
    info.rank = static_cast<int>(qr.rank());
    info.threshold = tau;
    const ColMajor R = qr.matrixR();
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int i = 0; i < info.rank; ++i)
    {
      const double d = std::abs(R.coeff(i, i));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    info.sigma_max = hi;
    info.sigma_kept = info.rank ? lo : 0.0;
    info.gap_ratio = info.rank && tau > 0 ? lo / tau : 0.0;
    return info;
  }
  Eigen::MatrixXd A(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  return rank_from_values(std::vector<double>(sv.data(), sv.data() + sv.size()), rows, cols,
                          policy);
}

CohomologyReport cohomology_dimensions(const PolarCounts& c, const IncidenceSet& inc,
                                       const RankPolicy& policy)
{
  if (inc.D0.rows() != c.n1 || inc.D0.cols() != c.n0 || inc.D1.rows() != c.n2
      || inc.D1.cols() != c.n1 || inc.D2.rows() != c.n3 || inc.D2.cols() != c.n2)
    throw ConstructionError("incidence matrices do not match the dimension record");
  CohomologyReport rep;
  rep.ranks = {numerical_rank(inc.D0, policy), numerical_rank(inc.D1, policy),
               numerical_rank(inc.D2, policy)};
  const int r0 = rep.ranks[0].rank, r1 = rep.ranks[1].rank, r2 = rep.ranks[2].rank;
  rep.dims = {c.n0 - r0, c.n1 - r1 - r0, c.n2 - r2 - r1, c.n3 - r2};
  rep.euler_cohomology = rep.dims[0] - rep.dims[1] + rep.dims[2] - rep.dims[3];
  rep.euler_dimensions = c.n0 - c.n1 + c.n2 - c.n3;
  const char* names[3] = {"D0", "D1", "D2"};
  for (int d = 0; d < 3; ++d)
    if (rep.ranks[d].gap_ratio < policy.warn_gap)
    {
      std::ostringstream msg;
      msg << names[d] << ": ill-conditioned rank decision, gap ratio " << rep.ranks[d].gap_ratio;
      rep.warnings.push_back(msg.str());
    }
  return rep;
}

Eigen::VectorXd divergence_preimage(int nr, int ns, int nt, const Eigen::VectorXd& m, double beta)
{
  RingIndex x(nr, ns, nt);
  if (m.size() != x.c.n3)
  {
    std::ostringstream msg;
    msg << "divergence_preimage: expected " << x.c.n3 << " coefficients, got " << m.size();
    throw std::invalid_argument(msg.str());
  }
  Eigen::VectorXd h = Eigen::VectorXd::Zero(x.c.n2);
  auto H = [&](int idx) -> double& { return h(idx - 1); };
  auto M = [&](int idx) { return m(idx - 1); };
  for (int k = 1; k <= nt; ++k)
  {
    auto S = [&](int e) -> double& { return H(x.side_face(k, e)); };
    const int moff = (k - 1) * x.c.nbar2;
    for (int f = 1; f <= x.c.nbar2; ++f)
      H(x.joint_face(k, f)) = beta;
    S(1) = 0;
    S(2) = 0;
    for (int i = 1; i <= nr; ++i)
    {
      S(2 + i) = 0;
      S(2 + i + nr) = -M(i + moff);
    }
    for (int j = 2; j <= ns - 2; ++j)
      for (int i = 1; i <= nr; ++i)
      {
        S(2 + i + (2 * j - 2) * nr) = 0;
        S(2 + i + (2 * j - 1) * nr) = S(2 + i + (2 * j - 3) * nr) - M(i + (j - 1) * nr + moff);
      }
  }
  return h;
}

HarmonicField harmonic_representative(const IncidenceSet& inc)
{
  Eigen::MatrixXd D0(inc.D0), D1(inc.D1);
  Eigen::BDCSVD<Eigen::MatrixXd> s0(D0, Eigen::ComputeFullU);
  Eigen::BDCSVD<Eigen::MatrixXd> s1(D1, Eigen::ComputeFullV);
  auto cut = [](const Eigen::VectorXd& sv, Eigen::Index rows, Eigen::Index cols) {
    const double tau = std::max(rows, cols) * std::numeric_limits<double>::epsilon()
                       * (sv.size() ? sv(0) : 0.0);
    int r = 0;
    while (r < sv.size() && sv(r) > tau)
      ++r;
    return r;
  };
  const int r0 = cut(s0.singularValues(), D0.rows(), D0.cols());
  const int r1 = cut(s1.singularValues(), D1.rows(), D1.cols());
  Eigen::MatrixXd U = s0.matrixU().leftCols(r0);
  Eigen::MatrixXd K = s1.matrixV().rightCols(D1.cols() - r1);
  Eigen::MatrixXd P = K - U * (U.transpose() * K);
  HarmonicField out;
  if (P.cols() == 0)
  {
    out.g = Eigen::VectorXd::Zero(D1.cols());
    out.curl_residual = 0;
    out.exact_component = 0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> sp(P, Eigen::ComputeThinU);
  out.g = sp.matrixU().col(0);
  if (out.g.maxCoeff() < -out.g.minCoeff())
    out.g = -out.g;
  out.curl_residual = (D1 * out.g).cwiseAbs().maxCoeff();
  out.exact_component = (U.transpose() * out.g).norm();
  return out;
}

} // namespace polar_derham
