#include "stabrad/geninv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <numbers>
#include <thread>

#include "stabrad/errors.hpp"
#include "stabrad/nelder_mead.hpp"
#include "stabrad/polyroots.hpp"
#include "stabrad/random.hpp"

namespace stabrad {

const char* to_string(RadiusCertificate c) {
  switch (c) {
    case RadiusCertificate::SpectralRadius:
      return "true-spectral-radius";
    case RadiusCertificate::NormSurrogate:
      return "norm-surrogate";
  }
  return "unknown";
}

double certified_spectral_radius(const CMatrix& A, RadiusCertificate* kind) {
  double best = spectral_radius(A);
  RadiusCertificate which = RadiusCertificate::SpectralRadius;
  const int powers = std::max<int>(16, 2 * static_cast<int>(A.rows()));
  CMatrix Ak = A;
  for (int k = 1; k <= powers && best > 0.0; ++k) {
    if (k > 1) Ak = Ak * A;
    const double bound = std::pow(operator_norm(Ak), 1.0 / k);
    if (bound < best) {
      best = bound;
      which = RadiusCertificate::NormSurrogate;
    }
  }
  if (kind) *kind = which;
  return best;
}

GenInverse classify(const Pencil& P, CMatrix L) {
  const CMatrix& T = P.T();
  if (L.rows() != P.x_dim() || L.cols() != P.y_dim())
    throw ContractViolation("classify: L must be x_dim x y_dim");
  GenInverse g;
  g.inner_residual = operator_norm(T * L * T - T);
  g.outer_residual = operator_norm(L * T * L - L);
  g.is_inner = g.inner_residual <= 1e-8 * (1.0 + operator_norm(T));
  g.is_reflexive = g.is_inner && g.outer_residual <= 1e-8 * (1.0 + operator_norm(L));
  g.sr_SL = certified_spectral_radius(P.S() * L, &g.certificate);
  g.L = std::move(L);
  return g;
}

InnerParametrization::InnerParametrization(const CMatrix& T, double eps_rel)
    : T_(T), L0_(pseudo_inverse(T, eps_rel)) {}

CMatrix InnerParametrization::operator()(const CMatrix& Z) const {
  if (Z.rows() != L0_.rows() || Z.cols() != L0_.cols())
    throw ContractViolation("parametrize_inner: Z must be x_dim x y_dim");
  return L0_ + Z - L0_ * (T_ * Z * T_) * L0_;
}

GenInverse parametrize_inner(const Pencil& P, const CMatrix& Z, double eps_rel) {
  InnerParametrization map(P.T(), eps_rel);
  return classify(P, map(Z));
}

GenInverse reflexive_closure(const Pencil& P, const CMatrix& L) {
  const CMatrix& T = P.T();
  if (L.rows() != P.x_dim() || L.cols() != P.y_dim())
    throw ContractViolation("reflexive_closure: L must be x_dim x y_dim");
  const double residual = operator_norm(T * L * T - T);
  if (residual > 1e-8 * (1.0 + operator_norm(T)))
    throw ContractViolation("reflexive_closure: L is not an inner inverse (||TLT - T|| = " +
                            std::to_string(residual) + ")");
  return classify(P, L * T * L);
}

// ---------------------------------------------------------------------------
// Fixed complements

namespace {

struct DiskSample {
  Complex lambda;
  Subspace kernel;
  Subspace range;
};

std::vector<Complex> disk_samples(double radius, int n_samples) {
  std::vector<Complex> pts{Complex(0.0)};
  const int per_circle = std::max(1, (n_samples + 3) / 4);
  for (int c = 0; c < 4; ++c) {
    const double rho = radius * (c + 1) / 4.0;
    for (int i = 0; i < per_circle; ++i) {
      const double theta = 2.0 * std::numbers::pi * (i + 0.25 * c) / per_circle;
      pts.push_back(std::polar(rho, theta));
    }
  }
  return pts;
}

double stacked_condition(const CMatrix& a, const CMatrix& b) {
  const Index n = a.rows();
  if (n == 0) return 1.0;
  CMatrix M(n, a.cols() + b.cols());
  M << a, b;
  RVector s = singular_values(M);
  if (s[n - 1] <= s[0] * 1e-14) return kInf;
  return s[0] / s[n - 1];
}

/// True if some confirmed point of the closed disk makes the candidate fail.
bool fails_inside_disk(const Pencil& P, const CMatrix& E, const CMatrix& F, double radius,
                       Rng& rng, Complex* where) {
  const Index n = P.x_dim();
  const Index p = P.y_dim();
  const Index e = E.cols();
  const Index f = F.cols();
  const double reach = radius * (1.0 + 1e-9);

  auto confirmed = [](const CMatrix& M, Index needed) {
    RVector s = singular_values(M);
    if (s.size() < needed) return true;
    return s[needed - 1] <= 1e-7 * std::max(s[0], 1e-300);
  };

  if (e > 0) {
    const CMatrix U = random_gaussian(rng, e, p);
    for (const Complex& z : det_roots(U * P.T() * E, U * P.S() * E)) {
      if (std::abs(z) > reach) continue;
      if (confirmed(P.at(z) * E, e)) {
        *where = z;
        return true;
      }
    }
  }
  if (f > 0 && e > 0) {
    const CMatrix V = random_gaussian(rng, n, e);
    CMatrix A(p, p), B = CMatrix::Zero(p, p);
    A << P.T() * V, F;
    B.leftCols(e) = P.S() * V;
    for (const Complex& z : det_roots(A, B)) {
      if (std::abs(z) > reach) continue;
      CMatrix M(p, n + f);
      M << P.at(z), F;
      if (confirmed(M, p)) {
        *where = z;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ComplementPair find_fixed_complements(const Pencil& P, const ComplementSearch& search) {
  if (!(search.radius > 0.0) || !std::isfinite(search.radius))
    throw ContractViolation("find_fixed_complements: radius must be positive and finite");
  if (search.n_attempts < 1 || search.n_samples < 1)
    throw ContractViolation("find_fixed_complements: need at least one sample and attempt");
  const Index n = P.x_dim();
  const Index p = P.y_dim();

  std::vector<DiskSample> samples;
  Index rank0 = -1;
  for (const Complex& z : disk_samples(search.radius, search.n_samples)) {
    const CMatrix A = P.at(z);
    Svd f = svd(A);
    RankDecision d = decide_rank(f.sigma, p, n, search.eps_rel, f.sigma.size() ? f.sigma[0] : 0.0);
    if (rank0 < 0) rank0 = d.rank;
    if (d.rank != rank0)
      throw ConstancyViolated("find_fixed_complements: dim N(T - lambda S) changes from " +
                                  std::to_string(n - rank0) + " to " +
                                  std::to_string(n - d.rank) + " inside the disk",
                              z);
    samples.push_back({z,
                       {n, f.V.rightCols(n - d.rank), d.tol_used, d.gap_ratio},
                       {p, f.U.leftCols(d.rank), d.tol_used, d.gap_ratio}});
  }

  const Index e = rank0;
  const Index fdim = p - rank0;
  Complex worst_lambda = 0.0;
  double worst_overall = 0.0;
  for (int attempt = 0; attempt < search.n_attempts; ++attempt) {
    Rng rng(mix_seed(search.seed, static_cast<std::uint64_t>(attempt)));
    const CMatrix E = random_orthonormal(rng, n, e);
    const CMatrix F = random_orthonormal(rng, p, fdim);

    double worst = 1.0;
    Complex worst_here = 0.0;
    for (const DiskSample& s : samples) {
      const double c = std::max(stacked_condition(E, s.kernel.basis),
                                stacked_condition(s.range.basis, F));
      if (c > worst) {
        worst = c;
        worst_here = s.lambda;
      }
    }
    bool ok = worst <= 1e10;
    if (ok) {
      Complex where = 0.0;
      if (fails_inside_disk(P, E, F, search.radius, rng, &where)) {
        ok = false;
        worst = kInf;
        worst_here = where;
      }
    }
    if (ok) {
      ComplementPair out;
      out.E = {n, E, search.eps_rel, kInf};
      out.F = {p, F, search.eps_rel, kInf};
      out.valid_radius = search.radius;
      out.samples_checked = static_cast<int>(samples.size());
      out.worst_condition = worst;
      out.attempt = attempt;
      return out;
    }
    if (worst >= worst_overall) {
      worst_overall = worst;
      worst_lambda = worst_here;
    }
  }
  throw NoComplementFound("find_fixed_complements: no complementary pair in " +
                              std::to_string(search.n_attempts) + " attempts",
                          worst_lambda);
}

// ---------------------------------------------------------------------------
// Resolvent

Resolvent::Resolvent(Pencil pencil, ComplementPair complements)
    : pencil_(std::move(pencil)), complements_(std::move(complements)) {
  if (complements_.E.ambient_dim != pencil_.x_dim() ||
      complements_.F.ambient_dim != pencil_.y_dim())
    throw ContractViolation("Resolvent: complement dimensions do not match the pencil");
  E_basis_ = complements_.E.basis;
  const Index p = pencil_.y_dim();
  if (complements_.F.is_zero()) {
    F_annihilator_ = CMatrix::Identity(p, p);
  } else {
    F_annihilator_ = kernel(complements_.F.basis.adjoint()).basis.adjoint();
  }
}

void Resolvent::require_inside(Complex lambda) const {
  if (!(std::abs(lambda) < complements_.valid_radius))
    throw ContractViolation("resolvent: |lambda| = " + std::to_string(std::abs(lambda)) +
                            " is outside the validated disk of radius " +
                            std::to_string(complements_.valid_radius));
}

CMatrix Resolvent::operator()(Complex lambda) const {
  require_inside(lambda);
  // G = B_E (C A B_E)^{-1} C with N(C) = F: range E, null space F, and A G A = A.
  const CMatrix A = pencil_.at(lambda);
  if (E_basis_.cols() == 0) return CMatrix::Zero(pencil_.x_dim(), pencil_.y_dim());
  const CMatrix core = F_annihilator_ * A * E_basis_;
  Eigen::PartialPivLU<CMatrix> lu(core);
  return E_basis_ * lu.solve(F_annihilator_);
}

CMatrix Resolvent::range_projector(Complex lambda) const {
  return pencil_.at(lambda) * (*this)(lambda);
}

CMatrix Resolvent::domain_projector(Complex lambda) const {
  return (*this)(lambda)*pencil_.at(lambda);
}

CMatrix resolvent_eval(const Resolvent& R, Complex lambda) { return R(lambda); }

CMatrix resolvent_eval_projective(const Resolvent& R, Complex lambda) {
  const CMatrix A = R.pencil().at(lambda);
  const ComplementPair& c = R.complements();
  if (!(std::abs(lambda) < c.valid_radius))
    throw ContractViolation("resolvent: lambda outside the validated disk");
  const Projector Pl = projector_along(range(A), c.F);
  const Projector Ql = projector_along(c.E, kernel(A));
  return Ql.matrix * pseudo_inverse(A) * Pl.matrix;
}

ResolventResiduals verify_resolvent(const Resolvent& R, Complex lambda, Complex mu) {
  const CMatrix& S = R.pencil().S();
  const CMatrix A = R.pencil().at(lambda);
  const CMatrix Gl = R(lambda);
  const CMatrix Gm = lambda == mu ? Gl : R(mu);
  ResolventResiduals out;
  out.inner = operator_norm(A * Gl * A - A);
  out.outer = operator_norm(Gl * A * Gl - Gl);
  out.identity = operator_norm(Gl - Gm - (lambda - mu) * (Gl * S * Gm));
  return out;
}

CMatrix resolvent_taylor_coefficient(const Resolvent& R, int n, double radius, int points) {
  if (n < 0 || points < 1) throw ContractViolation("resolvent_taylor_coefficient: bad arguments");
  CMatrix acc = CMatrix::Zero(R.pencil().x_dim(), R.pencil().y_dim());
  for (int j = 0; j < points; ++j) {
    const Complex z = std::polar(radius, 2.0 * std::numbers::pi * j / points);
    acc += R(z) * std::pow(z, -n);
  }
  return acc / static_cast<double>(points);
}

// ---------------------------------------------------------------------------
// Neumann family

double neumann_alpha(const Pencil& P, const CMatrix& L) {
  const double a = operator_norm(P.S() * L);
  const double b = operator_norm(L * P.S());
  return std::min(a > 0.0 ? 1.0 / a : kInf, b > 0.0 ? 1.0 / b : kInf);
}

CMatrix neumann_family(const Pencil& P, const CMatrix& L, Complex lambda) {
  if (L.rows() != P.x_dim() || L.cols() != P.y_dim())
    throw ContractViolation("neumann_family: L must be x_dim x y_dim");
  const double inner = operator_norm(P.T() * L * P.T() - P.T());
  if (inner > 1e-8 * (1.0 + operator_norm(P.T())))
    throw ContractViolation("neumann_family: L is not an inner inverse (||TLT - T|| = " +
                            std::to_string(inner) + ")");
  const double alpha = neumann_alpha(P, L);
  if (!(std::abs(lambda) < alpha))
    throw ContractViolation("neumann_family: |lambda| = " + std::to_string(std::abs(lambda)) +
                            " is not below alpha = " + std::to_string(alpha));
  const Index p = P.y_dim();
  const CMatrix M = CMatrix::Identity(p, p) - lambda * (P.S() * L);
  // F M = L, solved as M^T F^T = L^T.
  Eigen::PartialPivLU<CMatrix> lu(M.transpose());
  return lu.solve(L.transpose()).transpose();
}

double neumann_inner_residual(const Pencil& P, const CMatrix& L, Complex lambda) {
  const CMatrix A = P.at(lambda);
  return operator_norm(A * neumann_family(P, L, lambda) * A - A);
}

// ---------------------------------------------------------------------------
// Spectral radius minimization

namespace {

RVector to_coords(const CMatrix& Z) {
  const Index k = Z.size();
  RVector x(2 * k);
  for (Index i = 0; i < k; ++i) {
    x[i] = Z.data()[i].real();
    x[k + i] = Z.data()[i].imag();
  }
  return x;
}

CMatrix from_coords(const RVector& x, Index rows, Index cols) {
  const Index k = rows * cols;
  CMatrix Z(rows, cols);
  for (Index i = 0; i < k; ++i) Z.data()[i] = Complex(x[i], x[k + i]);
  return Z;
}

double power_norm_root(const CMatrix& A, int k) {
  CMatrix Ak = A;
  for (int s = 1; s < k; s *= 2) Ak = Ak * Ak;
  return std::pow(operator_norm(Ak), 1.0 / k);
}

// Newton on the power traces tr((S L)^k), k = 1..p, together with T L T = T.
// Unknowns are the real and imaginary parts of the entries of L.
class NilpotentSolver {
 public:
  NilpotentSolver(const Pencil& P) : P_(P), n_(P.x_dim()), p_(P.y_dim()) {}

  RVector residual(const RVector& x) const {
    const CMatrix L = from_coords(x, n_, p_);
    const CMatrix SL = P_.S() * L;
    const CMatrix inner = P_.T() * L * P_.T() - P_.T();
    RVector f(2 * p_ + 2 * inner.size());
    CMatrix power = SL;
    for (Index k = 0; k < p_; ++k) {
      if (k > 0) power = power * SL;
      const Complex tr = power.trace();
      f[2 * k] = tr.real();
      f[2 * k + 1] = tr.imag();
    }
    for (Index i = 0; i < inner.size(); ++i) {
      f[2 * p_ + 2 * i] = inner.data()[i].real();
      f[2 * p_ + 2 * i + 1] = inner.data()[i].imag();
    }
    return f;
  }

  Eigen::MatrixXd jacobian(const RVector& x) const {
    const CMatrix L = from_coords(x, n_, p_);
    const CMatrix& T = P_.T();
    const CMatrix SL = P_.S() * L;
    const Index nc = n_ * p_;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * p_ + 2 * T.size(), 2 * nc);
    CMatrix W = P_.S();  // (S L)^{k-1} S
    for (Index k = 1; k <= p_; ++k) {
      if (k > 1) W = SL * W;
      // d tr((S L)^k) / d L(i, j) = k W(j, i)
      for (Index j = 0; j < p_; ++j)
        for (Index i = 0; i < n_; ++i) {
          const Complex g = static_cast<double>(k) * W(j, i);
          const Index c = j * n_ + i;
          J(2 * (k - 1), c) = g.real();
          J(2 * (k - 1), nc + c) = -g.imag();
          J(2 * (k - 1) + 1, c) = g.imag();
          J(2 * (k - 1) + 1, nc + c) = g.real();
        }
    }
    // d(T L T) / d L(i, j) = T(:, i) T(j, :)
    for (Index j = 0; j < p_; ++j)
      for (Index i = 0; i < n_; ++i) {
        const CMatrix D = T.col(i) * T.row(j);
        const Index c = j * n_ + i;
        for (Index q = 0; q < D.size(); ++q) {
          const Complex g = D.data()[q];
          J(2 * p_ + 2 * q, c) = g.real();
          J(2 * p_ + 2 * q, nc + c) = -g.imag();
          J(2 * p_ + 2 * q + 1, c) = g.imag();
          J(2 * p_ + 2 * q + 1, nc + c) = g.real();
        }
      }
    return J;
  }

  double scaled_norm(const RVector& x) const {
    const CMatrix L = from_coords(x, n_, p_);
    const double s = 1.0 + operator_norm(P_.S()) * operator_norm(L) + operator_norm(P_.T());
    const RVector f = residual(x);
    double worst = 0.0;
    for (Index k = 0; k < p_; ++k)
      worst = std::max(worst, std::hypot(f[2 * k], f[2 * k + 1]) / std::pow(s, k + 1));
    for (Index i = 2 * p_; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i]) / s);
    return worst;
  }

  std::optional<RVector> newton(RVector x, const std::vector<bool>& free) const {
    std::vector<Index> cols;
    for (Index i = 0; i < static_cast<Index>(free.size()); ++i)
      if (free[static_cast<std::size_t>(i)]) cols.push_back(i);
    for (int it = 0; it < 60; ++it) {
      if (scaled_norm(x) <= 1e-15) return x;
      if (cols.empty()) return std::nullopt;
      const Eigen::MatrixXd J = jacobian(x);
      Eigen::MatrixXd Jf(J.rows(), static_cast<Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) Jf.col(static_cast<Index>(c)) = J.col(cols[c]);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Jf);
      const RVector step = cod.solve(-residual(x));
      if (!step.allFinite()) return std::nullopt;
      for (std::size_t c = 0; c < cols.size(); ++c) x[cols[c]] += step[static_cast<Index>(c)];
    }
    return scaled_norm(x) <= 1e-15 ? std::optional<RVector>(x) : std::nullopt;
  }

  /// Drives L to an inner inverse with S L nilpotent, then moves coordinates
  /// one at a time onto short dyadic values so that the nilpotency survives
  /// floating-point evaluation.
  std::optional<CMatrix> refine(const CMatrix& L) const {
    const Index N = 2 * n_ * p_;
    std::vector<bool> free(static_cast<std::size_t>(N), true);
    std::optional<RVector> x = newton(to_coords(L), free);
    if (!x) return std::nullopt;
    RVector cur = *x;
    for (Index idx = 0; idx < N; ++idx) {
      free[static_cast<std::size_t>(idx)] = false;
      bool snapped = false;
      for (int bits = 0; bits <= 12 && !snapped; ++bits) {
        const double unit = std::ldexp(1.0, bits);
        RVector trial = cur;
        trial[idx] = std::round(cur[idx] * unit) / unit;
        std::optional<RVector> solved = newton(trial, free);
        if (solved) {
          cur = *solved;
          snapped = true;
        }
      }
      if (!snapped) return from_coords(*x, n_, p_);
    }
    return from_coords(cur, n_, p_);
  }

 private:
  const Pencil& P_;
  Index n_;
  Index p_;
};

struct StartOutcome {
  std::string kind;
  GenInverse result;
};

}  // namespace

SrOptimum minimize_sr(const Pencil& P, const OptBudget& budget, double radius_hint,
                      const InnerObserver& observer) {
  if (budget.starts < 1 || budget.evals < 4)
    throw ContractViolation("minimize_sr: need at least one start and four evaluations");
  const Index n = P.x_dim();
  const Index p = P.y_dim();
  const InnerParametrization map(P.T(), budget.eps_rel);
  const double l0_norm = std::max(operator_norm(map.L0()), 1.0);
  const double entry_scale = l0_norm / (std::sqrt(static_cast<double>(n)) +
                                        std::sqrt(static_cast<double>(p)));

  SrOptimum out;

  // Resolvent start: G(0) on the largest validated disk we can find.
  std::optional<CMatrix> resolvent_start;
  {
    std::vector<double> radii;
    if (std::isfinite(radius_hint) && radius_hint > 0.0) {
      for (double f : {0.995, 0.99, 0.97, 0.9, 0.75, 0.5}) radii.push_back(f * radius_hint);
    } else {
      for (double r : {64.0, 16.0, 4.0, 1.0, 0.25}) radii.push_back(r);
    }
    for (double r : radii) {
      try {
        ComplementSearch search;
        search.radius = r;
        search.seed = mix_seed(budget.seed, 0xC0FFEE);
        search.eps_rel = budget.eps_rel;
        Resolvent R(P, find_fixed_complements(P, search));
        resolvent_start = R(0.0);
        out.resolvent_radius = r;
        break;
      } catch (const Error&) {
      }
    }
  }

  std::mutex observe_mutex;
  auto make_L = [&](const RVector& x) {
    CMatrix L = map(from_coords(x, n, p));
    if (observer) {
      std::lock_guard<std::mutex> lock(observe_mutex);
      observer(L);
    }
    return L;
  };

  const int stage_evals = budget.evals / 4;
  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(budget.starts));

  auto run_start = [&](int s) {
    Rng rng(mix_seed(budget.seed, static_cast<std::uint64_t>(s) + 1));
    std::string kind;
    CMatrix Z0;
    if (s == 0) {
      kind = "pseudo-inverse";
      Z0 = CMatrix::Zero(n, p);
    } else if (s == 1 && resolvent_start) {
      kind = "resolvent";
      Z0 = *resolvent_start;
    } else {
      kind = "random";
      std::uniform_real_distribution<double> spread(std::log(0.3), std::log(3.0));
      Z0 = random_gaussian(rng, n, p) * (entry_scale * std::exp(spread(rng)));
    }
    RVector x = to_coords(Z0);
    NelderMeadOptions opts;
    opts.max_evals = stage_evals;
    opts.initial_step = 0.25 * entry_scale;
    for (int k : {4, 8, 16}) {
      auto f = [&](const RVector& v) { return power_norm_root(P.S() * make_L(v), k); };
      x = nelder_mead(f, x, opts).x;
      opts.initial_step *= 0.5;
    }
    auto f = [&](const RVector& v) { return spectral_radius(P.S() * make_L(v)); };
    x = nelder_mead(f, x, opts).x;
    outcomes[static_cast<std::size_t>(s)] = {kind, classify(P, map(from_coords(x, n, p)))};
  };

  const int threads = std::clamp(budget.threads, 1, budget.starts);
  if (threads == 1) {
    for (int s = 0; s < budget.starts; ++s) run_start(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int s = next++; s < budget.starts; s = next++) run_start(s);
      });
    for (std::thread& th : pool) th.join();
  }

  // Deterministic argmin on (sr_SL, start index); closures compete with their inner inverse.
  bool have = false;
  for (int s = 0; s < budget.starts; ++s) {
    StartOutcome& o = outcomes[static_cast<std::size_t>(s)];
    out.starts.push_back({o.kind, o.result});
    GenInverse candidates[2] = {o.result, o.result};
    if (o.result.is_inner) candidates[1] = reflexive_closure(P, o.result.L);
    for (const GenInverse& c : candidates) {
      if (!c.is_inner) continue;
      if (!have || c.sr_SL < out.best.sr_SL) {
        out.best = c;
        out.best_start = s;
        have = true;
      }
    }
  }
  if (!have) {
    out.best = classify(P, map.L0());
    out.best_start = 0;
  }

  // Inner inverses with S L nilpotent exist only when k != 0, and there the
  // optimizer stalls at small but nonzero radii. Newton on the power traces
  // settles it from the best few candidates; for k = 0 it simply fails.
  std::vector<int> order(static_cast<std::size_t>(budget.starts));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return outcomes[static_cast<std::size_t>(a)].result.sr_SL <
           outcomes[static_cast<std::size_t>(b)].result.sr_SL;
  });
  NilpotentSolver solver(P);
  for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i) {
    const GenInverse& cand = outcomes[static_cast<std::size_t>(order[i])].result;
    if (!cand.is_inner || cand.sr_SL == 0.0) continue;
    if (std::optional<CMatrix> L = solver.refine(cand.L)) {
      GenInverse g = classify(P, *L);
      if (observer) observer(g.L);
      if (g.is_inner && g.sr_SL < out.best.sr_SL) {
        out.best = std::move(g);
        out.nilpotent_refined = true;
        break;
      }
    }
  }

  out.best_reflexive = out.best.is_inner ? reflexive_closure(P, out.best.L) : out.best;
  return out;
}

}  // namespace stabrad
