#include "stabrad/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

void require_finite(const CMatrix& A, const char* what) {
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i)
      if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag()))
        throw ContractViolation(std::string(what) + " has a non-finite entry at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
}

// One-sided Jacobi is the most accurate choice for small blocks; beyond this
// the divide-and-conquer bidiagonal SVD is much faster.
constexpr Index kJacobiMaxDim = 16;

Svd svd(const CMatrix& A) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (m == 0 || n == 0) return {identity(m), RVector(0), identity(n)};
  require_finite(A, "svd input");
  constexpr int opts = Eigen::ComputeFullU | Eigen::ComputeFullV;
  if (std::min(m, n) > kJacobiMaxDim) {
    Eigen::BDCSVD<CMatrix> solver(A, opts);
    if (solver.info() != Eigen::Success) throw ConvergenceError("svd: divide and conquer failed", 0);
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
  }
  Eigen::JacobiSVD<CMatrix> solver(A, opts);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("svd: Jacobi sweeps did not converge", 0);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RVector singular_values(const CMatrix& A) {
  if (A.size() == 0) return RVector(0);
  require_finite(A, "svd input");
  if (std::min(A.rows(), A.cols()) > kJacobiMaxDim) {
    Eigen::BDCSVD<CMatrix> solver(A);
    if (solver.info() != Eigen::Success) throw ConvergenceError("svd: divide and conquer failed", 0);
    return solver.singularValues();
  }
  Eigen::JacobiSVD<CMatrix> solver(A);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("svd: Jacobi sweeps did not converge", 0);
  return solver.singularValues();
}

RankDecision decide_rank(const RVector& sigma, Index rows, Index cols, double eps_rel,
                         double scale) {
  if (!(eps_rel > 0.0)) throw ContractViolation("rank_with_tol: eps_rel must be positive");
  RankDecision d;
  d.singular_values = sigma;
  const double dim = static_cast<double>(std::max<Index>({rows, cols, 1}));
  d.tol_used = scale > 0.0 ? eps_rel * dim * scale : eps_rel;
  Index r = 0;
  while (r < sigma.size() && sigma[r] > d.tol_used) ++r;
  d.rank = r;
  if (r == sigma.size() || sigma[r] == 0.0) {
    d.gap_ratio = kInf;
  } else {
    const double above = r > 0 ? sigma[r - 1] : std::max(scale, d.tol_used);
    d.gap_ratio = above / sigma[r];
  }
  return d;
}

RankDecision rank_with_tol(const CMatrix& A, double eps_rel) {
  RVector s = singular_values(A);
  const double smax = s.size() > 0 ? s[0] : 0.0;
  return decide_rank(s, A.rows(), A.cols(), eps_rel, smax);
}

RankDecision rank_with_tol(const CMatrix& A, double eps_rel, double scale) {
  return decide_rank(singular_values(A), A.rows(), A.cols(), eps_rel, scale);
}

double spectral_radius(const CMatrix& A) {
  if (A.rows() != A.cols())
    throw ContractViolation("spectral_radius: matrix is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", expected square");
  if (A.rows() == 0) return 0.0;
  require_finite(A, "spectral_radius input");
  Eigen::ComplexEigenSolver<CMatrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("spectral_radius: Schur QR iteration did not converge",
                           static_cast<int>(30 * A.rows()));
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix pseudo_inverse(const CMatrix& A, double eps_rel) {
  if (A.size() == 0) return CMatrix::Zero(A.cols(), A.rows());
  Svd f = svd(A);
  RankDecision d = decide_rank(f.sigma, A.rows(), A.cols(), eps_rel,
                               f.sigma.size() ? f.sigma[0] : 0.0);
  const Index r = d.rank;
  CMatrix out = CMatrix::Zero(A.cols(), A.rows());
  if (r == 0) return out;
  RVector inv = f.sigma.head(r).cwiseInverse();
  out.noalias() = f.V.leftCols(r) * inv.asDiagonal() * f.U.leftCols(r).adjoint();
  return out;
}

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  return singular_values(A)[0];
}

namespace {
void require_same_shape(const CMatrix& A, const CMatrix& B, const char* op) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw ContractViolation(std::string(op) + ": shapes " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + " and " + std::to_string(B.rows()) +
                            "x" + std::to_string(B.cols()) + " differ");
}
}  // namespace

CMatrix matmul(const CMatrix& A, const CMatrix& B) {
  if (A.cols() != B.rows())
    throw ContractViolation("matmul: inner dimensions " + std::to_string(A.cols()) + " and " +
                            std::to_string(B.rows()) + " differ");
  return A * B;
}

CMatrix add(const CMatrix& A, const CMatrix& B) {
  require_same_shape(A, B, "add");
  return A + B;
}

CMatrix scale(const CMatrix& A, Complex c) { return c * A; }

CMatrix adjoint(const CMatrix& A) { return A.adjoint(); }

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

CMatrix orthonormalize(const CMatrix& A) {
  if (A.cols() == 0) return CMatrix(A.rows(), 0);
  Eigen::HouseholderQR<CMatrix> qr(A);
  return qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
}

CMatrix make_matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = m ? static_cast<Index>(rows.begin()->size()) : 0;
  CMatrix A(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n)
      throw ContractViolation("make_matrix: ragged rows");
    Index j = 0;
    for (const Complex& v : row) A(i, j++) = v;
    ++i;
  }
  require_finite(A, "make_matrix");
  return A;
}

}  // namespace stabrad
