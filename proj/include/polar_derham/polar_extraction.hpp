// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sparse.hpp"
#include "tensor_complex.hpp"
#include <vector>

namespace polar_derham
{

/// The 3 x 2nr block tying the first two control rings to the three
/// central DOFs. Column (i, 1) is stored at i-1 and (i, 2) at nr+i-1.
class EbarBlock
{
public:
  explicit EbarBlock(int nr);

  int nr() const { return _nr; }
  const Eigen::MatrixXd& matrix() const { return _E; }
  const std::vector<double>& theta() const { return _theta; }

  /// Entry E_{l,(i,ring)}; l in 1..3, i wraps cyclically, ring in {1, 2}.
  double operator()(int l, int i, int ring) const;

  /// Return a copy with one entry shifted by delta (fault injection).
  EbarBlock perturbed(int l, int i, int ring, double delta) const;

private:
  int _nr;
  Eigen::MatrixXd _E;
  std::vector<double> _theta;
};

EbarBlock ebar_block(int nr);

/// Poloidal angles theta_i = 2pi + (1-2i)pi/n, reduced into [0, 2pi).
std::vector<double> ring_angles(int n);

struct PolarCounts
{
  int nbar0, nbar1, nbar2;
  int n0, n1, n2, n3;
};

PolarCounts polar_counts(int nr, int ns, int nt);

/// Floors nr >= 3, ns >= 4 (and nt >= 3 when nt > 0).
void check_polar_sizes(int nr, int ns, int nt = 3);

SparseMatrix extraction_E0(const EbarBlock& ebar, int ns);

/// Action algorithms of E10 (x of length nr ns) and E01 (x of length
/// nr (ns-1)), both producing vectors of length nbar1.
Eigen::VectorXd apply_E10(const EbarBlock& ebar, int ns, const Eigen::VectorXd& x);
Eigen::VectorXd apply_E01(const EbarBlock& ebar, int ns, const Eigen::VectorXd& x);

SparseMatrix extraction_E10(const EbarBlock& ebar, int ns);
SparseMatrix extraction_E01(const EbarBlock& ebar, int ns);
SparseMatrix extraction_E2(int nr, int ns);

struct ExtractionSet
{
  PolarCounts counts;
  SparseMatrix E0, E10, E01, E2;
  SparseMatrix E000, E100, E010, E001, E011, E101, E110, E111;

  /// 3D matrix for a tensor component kind.
  const SparseMatrix& of(ComponentKind c) const;
};

/// The 2D blocks and their eight 3D assemblies.
ExtractionSet assemble_3d(const EbarBlock& ebar, int ns, int nt);

/// Reduced dimension n_level.
int reduced_dim(const PolarCounts& c, int level);

/// Tensor coefficients (stacked over components) of a reduced field.
Eigen::VectorXd to_tensor_coeffs(const ExtractionSet& ext, int level, const Eigen::VectorXd& x);

/// Value of reduced basis function l (1-based) of the given level at a
/// parametric point: a scalar for levels 0 and 3, a 3-vector otherwise.
Eigen::VectorXd reduced_basis_eval(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                   int l, double r, double s, double t);

/// All reduced basis functions of level 0 or 3 at a point.
Eigen::VectorXd reduced_basis_all(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                  double r, double s, double t);

/// Parametric field value of reduced coefficients x at a point.
Eigen::VectorXd reduced_field_eval(const TensorSequence& seq, const ExtractionSet& ext, int level,
                                   const Eigen::VectorXd& x, double r, double s, double t);

} // namespace polar_derham
