#pragma once

// Subspace arithmetic on orthonormal bases: kernels, ranges, preimages,
// intersections, sums, distances and oblique projectors.

#include "stabrad/matrixcore.hpp"

namespace stabrad {

/// A linear subspace of C^ambient_dim held as an orthonormal basis.
///
/// basis is ambient_dim x dim and may have zero columns. tol_born is the
/// absolute singular-value threshold used by the rank decision that produced
/// the basis; gap_ratio is the smallest gap ratio over every rank decision on
/// the path that built it, so ill-determined dimensions stay visible.
struct Subspace {
  Index ambient_dim = 0;
  CMatrix basis;
  double tol_born = 0.0;
  double gap_ratio = kInf;

  Index dim() const { return basis.cols(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim; }

  /// Orthogonal projector onto the subspace.
  CMatrix projector() const { return basis * basis.adjoint(); }

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  /// Span of the given columns, orthonormalized with the rank tolerance.
  static Subspace span(const CMatrix& vectors, double eps_rel = kDefaultEpsRel);
};

/// Oblique projector with prescribed range and null space.
struct Projector {
  CMatrix matrix;
  Subspace range_space;
  Subspace null_space;
  /// Condition number of the stacked basis [B_range | B_null].
  double condition = 1.0;

  bool ill_conditioned() const { return condition > 1e8; }
};

/// Kernel of A. The tolerance is relative to sigma_max(A), or to `scale` when given.
Subspace kernel(const CMatrix& A, double eps_rel = kDefaultEpsRel);
Subspace kernel(const CMatrix& A, double eps_rel, double scale);

/// Range (column space) of A, with the same tolerance rules as kernel.
Subspace range(const CMatrix& A, double eps_rel = kDefaultEpsRel);
Subspace range(const CMatrix& A, double eps_rel, double scale);

/// A * V, with the rank tolerance anchored at ||A||.
Subspace image(const CMatrix& A, const Subspace& V, double eps_rel = kDefaultEpsRel);

/// {x : A x in W}, computed as kernel((I - P_W) A) with tolerance anchored at ||A||.
Subspace preimage(const CMatrix& A, const Subspace& W, double eps_rel = kDefaultEpsRel);

Subspace intersect(const Subspace& V, const Subspace& W, double eps_rel = kDefaultEpsRel);
Subspace sum(const Subspace& V, const Subspace& W, double eps_rel = kDefaultEpsRel);

/// True iff every basis vector of W lies within `tol` of V.
bool contains(const Subspace& V, const Subspace& W, double tol = 1e-8);

/// ||(I - P_W) x||_2.
double distance(const CVector& x, const Subspace& W);

/// Oblique projector onto range_space along null_space.
///
/// Throws DecompositionError when the dimensions do not add up to the ambient
/// dimension or the stacked basis is numerically singular. A condition number
/// above 1e8 is reported through Projector::ill_conditioned() but accepted.
Projector projector_along(const Subspace& range_space, const Subspace& null_space);

}  // namespace stabrad
