#include "stabrad/subspace.hpp"

#include <algorithm>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

namespace {

void require_same_ambient(const Subspace& V, const Subspace& W, const char* op) {
  if (V.ambient_dim != W.ambient_dim)
    throw ContractViolation(std::string(op) + ": ambient dimensions " +
                            std::to_string(V.ambient_dim) + " and " +
                            std::to_string(W.ambient_dim) + " differ");
}

double anchor(const RVector& sigma) { return sigma.size() ? sigma[0] : 0.0; }

Subspace kernel_impl(const CMatrix& A, double eps_rel, double scale, bool own_scale) {
  const Index n = A.cols();
  if (A.rows() == 0 || n == 0) {
    Subspace s = Subspace::full(n);
    s.tol_born = eps_rel;
    return s;
  }
  Svd f = svd(A);
  RankDecision d =
      decide_rank(f.sigma, A.rows(), n, eps_rel, own_scale ? anchor(f.sigma) : scale);
  return {n, f.V.rightCols(n - d.rank), d.tol_used, d.gap_ratio};
}

Subspace range_impl(const CMatrix& A, double eps_rel, double scale, bool own_scale) {
  const Index m = A.rows();
  if (m == 0 || A.cols() == 0) {
    Subspace s = Subspace::zero(m);
    s.tol_born = eps_rel;
    return s;
  }
  Svd f = svd(A);
  RankDecision d =
      decide_rank(f.sigma, m, A.cols(), eps_rel, own_scale ? anchor(f.sigma) : scale);
  return {m, f.U.leftCols(d.rank), d.tol_used, d.gap_ratio};
}

}  // namespace

Subspace Subspace::zero(Index ambient) { return {ambient, CMatrix(ambient, 0), 0.0, kInf}; }

Subspace Subspace::full(Index ambient) {
  return {ambient, CMatrix::Identity(ambient, ambient), 0.0, kInf};
}

Subspace Subspace::span(const CMatrix& vectors, double eps_rel) { return range(vectors, eps_rel); }

Subspace kernel(const CMatrix& A, double eps_rel) { return kernel_impl(A, eps_rel, 0.0, true); }

Subspace kernel(const CMatrix& A, double eps_rel, double scale) {
  return kernel_impl(A, eps_rel, scale, false);
}

Subspace range(const CMatrix& A, double eps_rel) { return range_impl(A, eps_rel, 0.0, true); }

Subspace range(const CMatrix& A, double eps_rel, double scale) {
  return range_impl(A, eps_rel, scale, false);
}

Subspace image(const CMatrix& A, const Subspace& V, double eps_rel) {
  if (A.cols() != V.ambient_dim)
    throw ContractViolation("image: matrix has " + std::to_string(A.cols()) +
                            " columns but subspace lives in dimension " +
                            std::to_string(V.ambient_dim));
  if (V.is_zero()) return Subspace::zero(A.rows());
  Subspace out = range(A * V.basis, eps_rel, operator_norm(A));
  out.gap_ratio = std::min(out.gap_ratio, V.gap_ratio);
  return out;
}

Subspace preimage(const CMatrix& A, const Subspace& W, double eps_rel) {
  if (A.rows() != W.ambient_dim)
    throw ContractViolation("preimage: matrix has " + std::to_string(A.rows()) +
                            " rows but subspace lives in dimension " +
                            std::to_string(W.ambient_dim));
  const double a_norm = operator_norm(A);
  CMatrix residual = A;
  if (!W.is_zero()) residual -= W.basis * (W.basis.adjoint() * A);
  Subspace out = kernel(residual, eps_rel, a_norm);
  out.gap_ratio = std::min(out.gap_ratio, W.gap_ratio);
  return out;
}

Subspace intersect(const Subspace& V, const Subspace& W, double eps_rel) {
  require_same_ambient(V, W, "intersect");
  const Index n = V.ambient_dim;
  if (V.is_zero() || W.is_zero()) return Subspace::zero(n);
  if (V.is_full()) return W;
  if (W.is_full()) return V;
  CMatrix stacked(2 * n, n);
  stacked.topRows(n) = CMatrix::Identity(n, n) - V.projector();
  stacked.bottomRows(n) = CMatrix::Identity(n, n) - W.projector();
  Subspace out = kernel(stacked, eps_rel, 1.0);
  out.gap_ratio = std::min({out.gap_ratio, V.gap_ratio, W.gap_ratio});
  return out;
}

Subspace sum(const Subspace& V, const Subspace& W, double eps_rel) {
  require_same_ambient(V, W, "sum");
  if (V.is_zero()) return W;
  if (W.is_zero()) return V;
  CMatrix joined(V.ambient_dim, V.dim() + W.dim());
  joined << V.basis, W.basis;
  Subspace out = range(joined, eps_rel, 1.0);
  out.gap_ratio = std::min({out.gap_ratio, V.gap_ratio, W.gap_ratio});
  return out;
}

bool contains(const Subspace& V, const Subspace& W, double tol) {
  require_same_ambient(V, W, "contains");
  for (Index j = 0; j < W.dim(); ++j)
    if (distance(W.basis.col(j), V) > tol) return false;
  return true;
}

double distance(const CVector& x, const Subspace& W) {
  if (x.size() != W.ambient_dim)
    throw ContractViolation("distance: vector length " + std::to_string(x.size()) +
                            " does not match ambient dimension " +
                            std::to_string(W.ambient_dim));
  if (W.is_zero()) return x.norm();
  CVector r = x - W.basis * (W.basis.adjoint() * x);
  return r.norm();
}

Projector projector_along(const Subspace& range_space, const Subspace& null_space) {
  require_same_ambient(range_space, null_space, "projector_along");
  const Index n = range_space.ambient_dim;
  const Index r = range_space.dim();
  if (r + null_space.dim() != n)
    throw DecompositionError("projector_along: dimensions " + std::to_string(r) + " + " +
                                 std::to_string(null_space.dim()) +
                                 " do not add up to " + std::to_string(n),
                             kInf);
  if (n == 0) return {CMatrix(0, 0), range_space, null_space, 1.0};

  CMatrix stacked(n, n);
  stacked << range_space.basis, null_space.basis;
  RVector sigma = singular_values(stacked);
  const double condition = sigma[n - 1] > 0.0 ? sigma[0] / sigma[n - 1] : kInf;
  if (decide_rank(sigma, n, n, kDefaultEpsRel, sigma[0]).rank < n)
    throw DecompositionError("projector_along: subspaces are not complementary", condition);

  // P = [B_R | B_N] diag(I_r, 0) [B_R | B_N]^{-1}
  Eigen::PartialPivLU<CMatrix> lu(stacked);
  CMatrix inverse = lu.inverse();
  CMatrix P = range_space.basis * inverse.topRows(r);
  return {std::move(P), range_space, null_space, condition};
}

}  // namespace stabrad
