// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "index.hpp"
#include "knots_splines.hpp"
#include <array>
#include <vector>

namespace polar_derham
{

struct Triple
{
  int r = 0, s = 0, t = 0;
  bool operator==(const Triple&) const = default;
};

/// Vectorization l = i + (j-1) nr + (k-1) nr ns, all 1-based.
class VecIndexMap
{
public:
  VecIndexMap(int nr, int ns, int nt);

  int nr() const { return _nr; }
  int ns() const { return _ns; }
  int nt() const { return _nt; }
  int size() const { return _nr * _ns * _nt; }

  /// Forward map; i and k wrap cyclically, j must be in range.
  int operator()(int i, int j, int k) const;
  std::array<int, 3> inverse(int l) const;
  /// 0-based storage offset of (i, j, k).
  int offset(int i, int j, int k) const { return (*this)(i, j, k) - 1; }

private:
  int _nr, _ns, _nt;
};

enum class Direction
{
  r = 0,
  s = 1,
  t = 2
};

/// Which directions of a tensor component carry the derivative space.
struct ComponentKind
{
  bool dr = false, ds = false, dt = false;
  bool operator==(const ComponentKind&) const = default;
};

/// The component kinds making up level 0..3, in the order of the
/// stacked coefficient vectors.
std::vector<ComponentKind> level_components(int level);

/// Name such as "100" for a component kind.
std::string component_name(ComponentKind c);

/// Tensor-product spline spaces on [0,R] x [0,S] x [0,T] with r and t
/// C1-periodic and s open.
class TensorSequence
{
public:
  TensorSequence(SplineSpace r, SplineSpace s, SplineSpace t);

  const SplineSpace& space(Direction d) const;
  const SplineSpace& sr() const { return _r; }
  const SplineSpace& ss() const { return _s; }
  const SplineSpace& st() const { return _t; }

  /// Periodic / open value dimensions (nr, ns, nt).
  Triple sizes() const { return {_r.dim(), _s.dim(), _t.dim()}; }
  Triple degrees() const { return {_r.degree(), _s.degree(), _t.degree()}; }

  Triple component_sizes(ComponentKind c) const;
  int component_dim(ComponentKind c) const;
  VecIndexMap index_map(ComponentKind c) const;

  /// Dimension of level 0..3 (sum over components).
  int level_dim(int level) const;
  /// 0-based offsets of the components inside a stacked level vector.
  std::vector<int> component_offsets(int level) const;

  /// Dense vector of all tensor basis functions of component c at (r,s,t).
  Eigen::VectorXd eval_component_basis(ComponentKind c, double r, double s, double t) const;
  /// Value of a component field with tensor coefficients at (r,s,t).
  double eval_component(ComponentKind c, const Eigen::VectorXd& coeffs, double r, double s,
                        double t) const;
  /// Parametric gradient of a level-0 field.
  Eigen::Vector3d eval_gradient(const Eigen::VectorXd& coeffs, double r, double s, double t) const;

private:
  SplineSpace _r, _s, _t;
};

/// Tensor sequence on uniform open knots. n holds the value-space
/// dimensions (periodic dimensions for r and t).
TensorSequence build_tensor_sequence(Triple p, Triple n, std::array<double, 3> lengths = {1, 1, 1});

/// Distinct-knot count giving a space of dimension n.
int distinct_knots_for(int p, int n, bool periodic);

/// Difference operator along direction d acting on a component whose
/// tensor dimensions are `in`: I ⊗ I ⊗ Δper (r), I ⊗ Δ ⊗ I (s),
/// Δper ⊗ I ⊗ I (t).
IntSparseMatrix directional_difference(Direction d, Triple in);

struct TensorDerivatives
{
  IntSparseMatrix D100, D010, D001;
};

/// The three level-0 coefficient derivative matrices.
TensorDerivatives derivative_matrices(const TensorSequence& seq);
TensorDerivatives derivative_matrices(Triple n);

/// Stacked grad (N1 x N0), curl (N2 x N1) and div (N3 x N2).
IntSparseMatrix grad_matrix(Triple n);
IntSparseMatrix curl_matrix(Triple n);
IntSparseMatrix div_matrix(Triple n);

Eigen::VectorXd apply_grad(const TensorSequence& seq, const Eigen::VectorXd& f);
Eigen::VectorXd apply_curl(const TensorSequence& seq, const Eigen::VectorXd& g);
Eigen::VectorXd apply_div(const TensorSequence& seq, const Eigen::VectorXd& h);

struct GrevillePoint
{
  double r, s, t;
};

/// Tensorized Greville abscissae of the level-0 space, indexed by the
/// VecIndexMap offset.
std::vector<GrevillePoint> greville_points(const TensorSequence& seq);

} // namespace polar_derham
