// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#include "polar_derham/tensor_complex.hpp"
#include "polar_derham/errors.hpp"
#include <sstream>

namespace polar_derham
{

VecIndexMap::VecIndexMap(int nr, int ns, int nt) : _nr(nr), _ns(ns), _nt(nt)
{
  if (nr < 1 || ns < 1 || nt < 1)
    throw std::invalid_argument("index map sizes must be positive");
}

int VecIndexMap::operator()(int i, int j, int k) const
{
  if (j < 1 || j > _ns)
    throw std::out_of_range("s index out of range");
  return wrap(i, _nr) + (j - 1) * _nr + (wrap(k, _nt) - 1) * _nr * _ns;
}

std::array<int, 3> VecIndexMap::inverse(int l) const
{
  if (l < 1 || l > size())
    throw std::out_of_range("vector index out of range");
  const int m = l - 1;
  return {m % _nr + 1, (m / _nr) % _ns + 1, m / (_nr * _ns) + 1};
}

std::vector<ComponentKind> level_components(int level)
{
  switch (level)
  {
  case 0:
    return {{false, false, false}};
  case 1:
    return {{true, false, false}, {false, true, false}, {false, false, true}};
  case 2:
    return {{false, true, true}, {true, false, true}, {true, true, false}};
  case 3:
    return {{true, true, true}};
  default:
    throw std::invalid_argument("level must be 0..3");
  }
}

std::string component_name(ComponentKind c)
{
  std::string s;
  s += c.dr ? '1' : '0';
  s += c.ds ? '1' : '0';
  s += c.dt ? '1' : '0';
  return s;
}

TensorSequence::TensorSequence(SplineSpace r, SplineSpace s, SplineSpace t)
    : _r(std::move(r)), _s(std::move(s)), _t(std::move(t))
{
  if (!_r.periodic() || !_t.periodic())
    throw ConstructionError("r and t spaces must be periodic");
  if (_s.periodic())
    throw ConstructionError("s space must not be periodic");
  if (_r.degree() < 2 || _s.degree() < 2 || _t.degree() < 2)
    throw ConstructionError("degrees must be at least 2 in every direction");
  if (_s.dim() < 2)
    throw ConstructionError("s space needs at least two basis functions");
}

const SplineSpace& TensorSequence::space(Direction d) const
{
  switch (d)
  {
  case Direction::r:
    return _r;
  case Direction::s:
    return _s;
  default:
    return _t;
  }
}

Triple TensorSequence::component_sizes(ComponentKind c) const
{
  return {_r.dim(), c.ds ? _s.derivative_dim() : _s.dim(), _t.dim()};
}

int TensorSequence::component_dim(ComponentKind c) const
{
  auto n = component_sizes(c);
  return n.r * n.s * n.t;
}

VecIndexMap TensorSequence::index_map(ComponentKind c) const
{
  auto n = component_sizes(c);
  return VecIndexMap(n.r, n.s, n.t);
}

int TensorSequence::level_dim(int level) const
{
  int n = 0;
  for (auto c : level_components(level))
    n += component_dim(c);
  return n;
}

std::vector<int> TensorSequence::component_offsets(int level) const
{
  std::vector<int> off;
  int o = 0;
  for (auto c : level_components(level))
  {
    off.push_back(o);
    o += component_dim(c);
  }
  return off;
}

namespace
{
struct Factors
{
  Eigen::VectorXd r, s, t;
};

Factors factors(const TensorSequence& seq, ComponentKind c, double r, double s, double t)
{
  return {c.dr ? seq.sr().eval_derivative_basis(r) : seq.sr().eval_basis(r),
          c.ds ? seq.ss().eval_derivative_basis(s) : seq.ss().eval_basis(s),
          c.dt ? seq.st().eval_derivative_basis(t) : seq.st().eval_basis(t)};
}

double contract(const Factors& f, const Eigen::VectorXd& coeffs)
{
  const auto nr = f.r.size(), ns = f.s.size(), nt = f.t.size();
  if (coeffs.size() != nr * ns * nt)
    throw std::invalid_argument("coefficient length does not match component dimension");
  double v = 0;
  for (Eigen::Index k = 0; k < nt; ++k)
  {
    if (f.t(k) == 0.0)
      continue;
    for (Eigen::Index j = 0; j < ns; ++j)
    {
      if (f.s(j) == 0.0)
        continue;
      const double w = f.t(k) * f.s(j);
      v += w * coeffs.segment(nr * (j + ns * k), nr).dot(f.r);
    }
  }
  return v;
}
} // namespace

Eigen::VectorXd TensorSequence::eval_component_basis(ComponentKind c, double r, double s,
                                                     double t) const
{
  auto f = factors(*this, c, r, s, t);
  const auto nr = f.r.size(), ns = f.s.size(), nt = f.t.size();
  Eigen::VectorXd B(nr * ns * nt);
  for (Eigen::Index k = 0; k < nt; ++k)
    for (Eigen::Index j = 0; j < ns; ++j)
      B.segment(nr * (j + ns * k), nr) = f.t(k) * f.s(j) * f.r;
  return B;
}

double TensorSequence::eval_component(ComponentKind c, const Eigen::VectorXd& coeffs, double r,
                                      double s, double t) const
{
  return contract(factors(*this, c, r, s, t), coeffs);
}

Eigen::Vector3d TensorSequence::eval_gradient(const Eigen::VectorXd& coeffs, double r, double s,
                                              double t) const
{
  Factors f{_r.eval_basis(r), _s.eval_basis(s), _t.eval_basis(t)};
  Eigen::Vector3d g;
  Factors fr = f;
  fr.r = _r.eval_basis_derivatives(r);
  g(0) = contract(fr, coeffs);
  Factors fs = f;
  fs.s = _s.eval_basis_derivatives(s);
  g(1) = contract(fs, coeffs);
  Factors ft = f;
  ft.t = _t.eval_basis_derivatives(t);
  g(2) = contract(ft, coeffs);
  return g;
}

int distinct_knots_for(int p, int n, bool periodic)
{
  const int raw = periodic ? n + 2 : n;
  return raw - p + 1;
}

TensorSequence build_tensor_sequence(Triple p, Triple n, std::array<double, 3> lengths)
{
  if (p.r < 2 || p.s < 2 || p.t < 2)
    throw ConstructionError("degrees must be at least 2 in every direction");
  if (n.r < 3 || n.t < 3)
    throw ConstructionError("periodic dimensions n^r and n^t must be at least 3");
  for (double L : lengths)
    if (!(L > 0))
      throw std::invalid_argument("interval lengths must be positive");
  auto make = [](int deg, int dim, bool periodic, double L, const char* name) {
    const int distinct = distinct_knots_for(deg, dim, periodic);
    if (distinct < 2)
    {
      std::ostringstream msg;
      msg << "dimension " << dim << " too small for degree " << deg << " in direction "
          << name;
      throw ConstructionError(msg.str());
    }
    return SplineSpace(make_uniform_open_knots(deg, distinct, 0.0, L), periodic);
  };
  return TensorSequence(make(p.r, n.r, true, lengths[0], "r"),
                        make(p.s, n.s, false, lengths[1], "s"),
                        make(p.t, n.t, true, lengths[2], "t"));
}

IntSparseMatrix directional_difference(Direction d, Triple in)
{
  switch (d)
  {
  case Direction::r:
    return kron(identity<int>(in.t),
                kron(identity<int>(in.s), difference_matrix(in.r, true)));
  case Direction::s:
    return kron(identity<int>(in.t),
                kron(difference_matrix(in.s, false), identity<int>(in.r)));
  default:
    return kron(difference_matrix(in.t, true),
                kron(identity<int>(in.s), identity<int>(in.r)));
  }
}

TensorDerivatives derivative_matrices(Triple n)
{
  return {directional_difference(Direction::r, n), directional_difference(Direction::s, n),
          directional_difference(Direction::t, n)};
}

TensorDerivatives derivative_matrices(const TensorSequence& seq)
{
  return derivative_matrices(seq.sizes());
}

IntSparseMatrix grad_matrix(Triple n)
{
  auto D = derivative_matrices(n);
  return vstack<int>({D.D100, D.D010, D.D001});
}

IntSparseMatrix curl_matrix(Triple n)
{
  const Triple full = n, red{n.r, n.s - 1, n.t};
  const int Nf = n.r * n.s * n.t, Nr = n.r * (n.s - 1) * n.t;
  auto D100f = directional_difference(Direction::r, full);
  auto D100r = directional_difference(Direction::r, red);
  auto D010f = directional_difference(Direction::s, full);
  auto D001f = directional_difference(Direction::t, full);
  auto D001r = directional_difference(Direction::t, red);
  IntSparseMatrix h1 = hstack<int>({zeros<int>(Nr, Nf), -D001r, D010f});
  IntSparseMatrix h2 = hstack<int>({D001f, zeros<int>(Nf, Nr), -D100f});
  IntSparseMatrix h3 = hstack<int>({-D010f, D100r, zeros<int>(Nr, Nf)});
  return vstack<int>({h1, h2, h3});
}

IntSparseMatrix div_matrix(Triple n)
{
  const Triple full = n, red{n.r, n.s - 1, n.t};
  return hstack<int>({directional_difference(Direction::r, red),
                      directional_difference(Direction::s, full),
                      directional_difference(Direction::t, red)});
}

namespace
{
void check_len(const Eigen::VectorXd& v, int n, const char* what)
{
  if (v.size() != n)
  {
    std::ostringstream msg;
    msg << what << ": expected " << n << " coefficients, got " << v.size();
    throw std::invalid_argument(msg.str());
  }
}
} // namespace

Eigen::VectorXd apply_grad(const TensorSequence& seq, const Eigen::VectorXd& f)
{
  check_len(f, seq.level_dim(0), "apply_grad");
  return grad_matrix(seq.sizes()).cast<double>() * f;
}

Eigen::VectorXd apply_curl(const TensorSequence& seq, const Eigen::VectorXd& g)
{
  check_len(g, seq.level_dim(1), "apply_curl");
  return curl_matrix(seq.sizes()).cast<double>() * g;
}

Eigen::VectorXd apply_div(const TensorSequence& seq, const Eigen::VectorXd& h)
{
  check_len(h, seq.level_dim(2), "apply_div");
  return div_matrix(seq.sizes()).cast<double>() * h;
}

std::vector<GrevillePoint> greville_points(const TensorSequence& seq)
{
  auto xr = seq.sr().greville(), xs = seq.ss().greville(), xt = seq.st().greville();
  std::vector<GrevillePoint> pts;
  pts.reserve(xr.size() * xs.size() * xt.size());
  for (double t : xt)
    for (double s : xs)
      for (double r : xr)
        pts.push_back({r, s, t});
  return pts;
}

} // namespace polar_derham
