#include "stabrad/pencil.hpp"

#include <algorithm>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

Pencil::Pencil(CMatrix T, CMatrix S) : T_(std::move(T)), S_(std::move(S)) {
  if (T_.rows() != S_.rows() || T_.cols() != S_.cols())
    throw ContractViolation("Pencil: T is " + std::to_string(T_.rows()) + "x" +
                            std::to_string(T_.cols()) + " but S is " +
                            std::to_string(S_.rows()) + "x" + std::to_string(S_.cols()));
  if (T_.size() == 0) throw ContractViolation("Pencil: empty matrices");
  require_finite(T_, "T");
  require_finite(S_, "S");
}

const Subspace& LimitSpaces::N(int m) const {
  return n_seq[static_cast<std::size_t>(std::min(m, stabilized_at))];
}

const Subspace& LimitSpaces::R(int m) const {
  return r_seq[static_cast<std::size_t>(std::min(m, stabilized_at))];
}

int default_m_cap(const Pencil& P) {
  return 4 * static_cast<int>(std::min(P.x_dim(), P.y_dim())) + 4;
}

LimitSpaces limit_spaces(const Pencil& P, int m_cap, double eps_rel) {
  if (m_cap <= 0) m_cap = default_m_cap(P);
  const Index n = P.x_dim();
  LimitSpaces out;
  out.n_seq.push_back(Subspace::zero(n));
  out.r_seq.push_back(Subspace::full(n));

  for (int m = 0;; ++m) {
    if (m >= m_cap)
      throw NotStabilized("limit_spaces: N_m / R_m dimensions still changing", m_cap);
    const Subspace& Nm = out.n_seq.back();
    const Subspace& Rm = out.r_seq.back();
    Subspace n_next = preimage(P.T(), image(P.S(), Nm, eps_rel), eps_rel);
    Subspace r_next = preimage(P.S(), image(P.T(), Rm, eps_rel), eps_rel);
    const bool settled = n_next.dim() == Nm.dim() && r_next.dim() == Rm.dim();
    out.gap_ratio = std::min({out.gap_ratio, n_next.gap_ratio, r_next.gap_ratio});
    if (settled && m > 0) {
      out.stabilized_at = m;
      break;
    }
    out.n_seq.push_back(std::move(n_next));
    out.r_seq.push_back(std::move(r_next));
  }

  out.kernel_T = out.n_seq.size() > 1 ? out.n_seq[1] : kernel(P.T(), eps_rel);
  out.x_inf = out.r_seq.back();
  out.y_inf = image(P.T(), out.x_inf, eps_rel);
  Subspace overlap = intersect(out.kernel_T, out.x_inf, eps_rel);
  out.gap_ratio = std::min({out.gap_ratio, out.y_inf.gap_ratio, overlap.gap_ratio});
  out.k = out.kernel_T.dim() - overlap.dim();
  return out;
}

ChainSpace chain_space(const Pencil& P, int m, double eps_rel) {
  if (m < 1) throw ContractViolation("chain_space: m must be at least 1");
  const Index n = P.x_dim();
  const Index p = P.y_dim();
  ChainSpace out;
  out.m = m;
  out.x_dim = n;
  if (m == 1) {
    out.basis = CMatrix::Identity(n, n);
    return out;
  }
  // Block row i (i = 2..m): -S at block column i-1, T at block column i.
  CMatrix M = CMatrix::Zero((m - 1) * p, m * n);
  for (int i = 2; i <= m; ++i) {
    M.block((i - 2) * p, (i - 2) * n, p, n) = -P.S();
    M.block((i - 2) * p, (i - 1) * n, p, n) = P.T();
  }
  Subspace K = kernel(M, eps_rel);
  out.basis = std::move(K.basis);
  out.gap_ratio = K.gap_ratio;
  return out;
}

namespace {

struct GammaValue {
  double gamma;
  double gap_ratio;
};

GammaValue gamma_impl(const Pencil& P, const Subspace& Nm, int m, double eps_rel) {
  ChainSpace chains = chain_space(P, m, eps_rel);
  if (chains.dim() == 0) return {kInf, chains.gap_ratio};

  const CMatrix A = P.T() * chains.block(1);
  CMatrix B = chains.block(m);
  if (!Nm.is_zero()) B -= Nm.basis * (Nm.basis.adjoint() * B);

  // Chain basis is orthonormal, so B is measured against unit scale.
  Svd fb = svd(B);
  RankDecision db = decide_rank(fb.sigma, B.rows(), B.cols(), eps_rel, 1.0);
  double gap = std::min(chains.gap_ratio, db.gap_ratio);
  const Index r = db.rank;
  if (r == 0) return {kInf, gap};

  const CMatrix V = fb.V.leftCols(r);
  const CMatrix K = fb.V.rightCols(B.cols() - r);

  // Minimizing over the N(B) component removes the part of A V that A N(B) can cancel.
  CMatrix At = A * V;
  if (K.cols() > 0) {
    Subspace cancel = range(A * K, eps_rel, std::max(operator_norm(A), 1.0));
    gap = std::min(gap, cancel.gap_ratio);
    if (!cancel.is_zero()) At -= cancel.basis * (cancel.basis.adjoint() * At);
  }
  const CMatrix Bt = B * V;

  // min ||At u|| / ||Bt u|| through the QR / cosine-sine route:
  // [At; Bt] = [Q1; Q2] R, then the ratio is ||Q1 y|| / ||Q2 y|| with y = R u.
  CMatrix stacked(At.rows() + Bt.rows(), r);
  stacked << At, Bt;
  Eigen::HouseholderQR<CMatrix> qr(stacked);
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(stacked.rows(), r);
  const CMatrix Q1 = Q.topRows(At.rows());
  const CMatrix Q2 = Q.bottomRows(Bt.rows());

  if (Q1.rows() < r) return {0.0, gap};
  Eigen::JacobiSVD<CMatrix> s1(Q1, Eigen::ComputeFullV);
  const double c = s1.singularValues()[r - 1];
  const CVector y = s1.matrixV().col(r - 1);
  const double s = (Q2 * y).norm();
  if (s == 0.0) return {kInf, gap};
  return {c / s, gap};
}

}  // namespace

double gamma_m(const Pencil& P, int m, double eps_rel) {
  if (m < 1) throw ContractViolation("gamma_m: m must be at least 1");
  LimitSpaces limits = limit_spaces(P, 0, eps_rel);
  return gamma_m(P, limits, m, eps_rel);
}

double gamma_m(const Pencil& P, const LimitSpaces& limits, int m, double eps_rel) {
  if (m < 1) throw ContractViolation("gamma_m: m must be at least 1");
  return gamma_impl(P, limits.N(m), m, eps_rel).gamma;
}

std::vector<GammaEntry> gamma_sequence(const Pencil& P, const LimitSpaces& limits, int m_max,
                                       double eps_rel) {
  if (m_max < 1) throw ContractViolation("gamma_sequence: m_max must be at least 1");
  std::vector<GammaEntry> out;
  out.reserve(static_cast<std::size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) {
    GammaValue g = gamma_impl(P, limits.N(m), m, eps_rel);
    out.push_back({m, g.gamma, g.gap_ratio});
  }
  return out;
}

double reduced_min_modulus(const CMatrix& A, double eps_rel) {
  RankDecision d = rank_with_tol(A, eps_rel);
  if (d.rank == 0) return kInf;
  return d.singular_values[d.rank - 1];
}

}  // namespace stabrad
