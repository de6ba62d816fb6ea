#pragma once

// Dense complex matrix kernel shared by every other module.

#include <Eigen/Dense>

#include <complex>
#include <limits>

namespace stabrad {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultEpsRel = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Full singular value decomposition A = U diag(sigma) V*.
/// U is rows x rows, V is cols x cols and sigma has min(rows, cols) entries in
/// non-increasing order.
struct Svd {
  CMatrix U;
  RVector sigma;
  CMatrix V;
};

/// Outcome of a tolerance-based rank decision.
///
/// gap_ratio is sigma[rank-1] / sigma[rank]. It is +inf when nothing was
/// discarded or the first discarded value is exactly zero. For rank 0 the
/// reference scale stands in for sigma[-1].
struct RankDecision {
  Index rank = 0;
  RVector singular_values;
  double tol_used = 0.0;
  double gap_ratio = kInf;

  bool well_determined(double min_gap = 1e3) const { return gap_ratio >= min_gap; }
};

/// Throws ContractViolation unless every entry is finite.
void require_finite(const CMatrix& A, const char* what = "matrix");

Svd svd(const CMatrix& A);
RVector singular_values(const CMatrix& A);

/// tol_used = eps_rel * max(rows, cols) * sigma_max (eps_rel when sigma_max = 0).
RankDecision rank_with_tol(const CMatrix& A, double eps_rel = kDefaultEpsRel);

/// Same rule with an explicit reference scale in place of sigma_max.
///
/// Used when A is a product whose exact value may be zero, so that its own
/// sigma_max is rounding noise and cannot anchor a relative tolerance.
RankDecision rank_with_tol(const CMatrix& A, double eps_rel, double scale);

RankDecision decide_rank(const RVector& sigma, Index rows, Index cols, double eps_rel,
                         double scale);

/// Largest eigenvalue modulus, from a Hessenberg/Schur reduction.
double spectral_radius(const CMatrix& A);

/// Moore-Penrose inverse with singular values at or below the rank tolerance dropped.
CMatrix pseudo_inverse(const CMatrix& A, double eps_rel = kDefaultEpsRel);

/// Spectral norm (largest singular value).
double operator_norm(const CMatrix& A);

CMatrix matmul(const CMatrix& A, const CMatrix& B);
CMatrix add(const CMatrix& A, const CMatrix& B);
CMatrix scale(const CMatrix& A, Complex c);
CMatrix adjoint(const CMatrix& A);
CMatrix identity(Index n);

/// Orthonormal basis of the column space of A, columns chosen by QR with
/// pivoting. Cheaper than an SVD when A is known to have full column rank.
CMatrix orthonormalize(const CMatrix& A);

/// Builds a matrix from nested initializer lists of complex entries.
CMatrix make_matrix(std::initializer_list<std::initializer_list<Complex>> rows);

}  // namespace stabrad
