#include "stabrad/radius.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "stabrad/errors.hpp"
#include "stabrad/polyroots.hpp"
#include "stabrad/random.hpp"

namespace stabrad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool close(Complex a, Complex b) {
  return std::abs(a - b) <= kClusterTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool rank_drops(const CMatrix& A, Index rho) {
  if (rho == 0) return false;
  const RVector s = singular_values(A);
  if (s.size() < rho) return true;
  return s[rho - 1] < kDropTol * std::max(s[0], std::numeric_limits<double>::min());
}

void add_unique(std::vector<Complex>& pts, Complex z) {
  for (const Complex& w : pts)
    if (close(z, w)) return;
  pts.push_back(z);
}

std::vector<Complex> pencil_roots(const CMatrix& A, const CMatrix& B, double radius) {
  const int degree = static_cast<int>(A.rows());
  std::vector<Complex> roots = polynomial_roots(det_polynomial(A, B, degree, radius));
  for (Complex& r : roots) r = refine_det_root(A, B, r);
  return roots;
}

double characteristic_scale(const Pencil& P) {
  const double t = operator_norm(P.T());
  const double s = operator_norm(P.S());
  return (t > 0.0 && s > 0.0) ? t / s : 1.0;
}

}  // namespace

OracleResult d_oracle(const Pencil& P, const SearchConfig& search) {
  const Index n = P.x_dim();
  const Index p = P.y_dim();
  const double scale = characteristic_scale(P);
  Rng rng(mix_seed(search.seed, 0x0AC1E));

  OracleResult out;
  for (int i = 0; i < 16; ++i) {
    const Complex z = random_gaussian(rng, 1, 1)(0, 0) * scale;
    out.generic_rank = std::max(out.generic_rank, rank_with_tol(P.at(z), search.eps_rel).rank);
  }
  const Index rho = out.generic_rank;

  if (search.rmax > 0.0) {
    out.rmax = search.rmax;
  } else {
    const RankDecision s = rank_with_tol(P.S(), search.eps_rel);
    if (s.rank == n && n > 0)
      out.rmax = 2.0 * (1.0 + operator_norm(P.T()) / s.singular_values[n - 1]);
  }
  if (rho == 0) return out;

  std::vector<Complex> drops;
  if (n == p && rho == n) {
    for (const Complex& z : pencil_roots(P.T(), P.S(), scale))
      if (rank_drops(P.at(z), rho)) add_unique(drops, z);
  } else {
    // Compressions U (T - lambda S) V share the true drop points; their other
    // roots move with U and V.
    std::vector<std::vector<Complex>> confirmed(3);
    std::vector<std::vector<Complex>> all_roots(3);
    for (int c = 0; c < 3; ++c) {
      const CMatrix U = random_gaussian(rng, rho, p);
      const CMatrix V = random_gaussian(rng, n, rho);
      const CMatrix A = U * P.T() * V;
      const CMatrix B = U * P.S() * V;
      const std::vector<Complex> coeffs = det_polynomial(A, B, static_cast<int>(rho), scale);
      double size = 0.0;
      for (const Complex& a : coeffs) size = std::max(size, std::abs(a));
      const double expected = std::pow(operator_norm(U) * operator_norm(V) *
                                           (operator_norm(P.T()) + scale * operator_norm(P.S())),
                                       static_cast<double>(rho));
      if (!(size > 1e-12 * expected))
        throw OracleUnreliable("d_oracle: compression " + std::to_string(c) +
                               " has a vanishing determinant although the generic rank is " +
                               std::to_string(rho));
      for (Complex z : polynomial_roots(coeffs)) {
        z = refine_det_root(A, B, z);
        all_roots[static_cast<std::size_t>(c)].push_back(z);
        if (rank_drops(P.at(z), rho)) add_unique(confirmed[static_cast<std::size_t>(c)], z);
      }
    }
    for (std::size_t c = 0; c < 3; ++c)
      for (const Complex& z : confirmed[c]) {
        for (std::size_t o = 0; o < 3; ++o) {
          const auto& other = all_roots[o];
          if (std::none_of(other.begin(), other.end(), [&](Complex w) { return close(z, w); })) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "d_oracle: drop point %.10g%+.10gi of compression %zu is not a root "
                          "of compression %zu",
                          z.real(), z.imag(), c, o);
            throw OracleUnreliable(buf);
          }
        }
        add_unique(drops, z);
      }
  }

  std::erase_if(drops, [&](Complex z) { return std::abs(z) > out.rmax; });
  std::sort(drops.begin(), drops.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  out.drop_points = drops;
  for (const Complex& z : drops)
    if (std::abs(z) > kOriginTol * scale) {
      out.d = std::abs(z);
      break;
    }
  return out;
}

BartLayResult d_bartlay(const Pencil& P, int m_max, double eps_rel) {
  return d_bartlay(P, limit_spaces(P, 0, eps_rel), m_max, eps_rel);
}

BartLayResult d_bartlay(const Pencil& P, const LimitSpaces& limits, int m_max, double eps_rel) {
  if (m_max < 3) throw ContractViolation("d_bartlay: m_max must be at least 3");
  const std::vector<GammaEntry> seq = gamma_sequence(P, limits, m_max + 1, eps_rel);
  auto g = [&](int m) { return seq[static_cast<std::size_t>(m - 1)].gamma; };

  BartLayResult out;
  for (int m = 1; m <= m_max; ++m) {
    GammaRow row;
    row.m = m;
    row.gamma = g(m);
    row.root = std::isinf(g(m)) ? kInf : std::pow(g(m), 1.0 / m);
    const double a = g(m);
    const double b = g(m + 1);
    if (std::isinf(b))
      row.ratio = kInf;
    else if (a == 0.0)
      row.ratio = b == 0.0 ? 0.0 : kInf;
    else
      row.ratio = b / a;
    row.gap_ratio = seq[static_cast<std::size_t>(m - 1)].gap_ratio;
    out.table.push_back(row);
  }

  const int M = m_max + 1;
  if (std::isinf(g(m_max)) || std::isinf(g(M))) {
    out.d = kInf;
    out.lag = 1;
    return out;
  }
  for (int lag = 1; lag <= 2; ++lag) {
    double e[3];
    bool usable = true;
    for (int i = 0; i < 3; ++i) {
      const int m = M - 2 + i;
      const double num = g(m);
      const double den = g(m - lag);
      if (!(num > 0.0) || !(den > 0.0) || std::isinf(num) || std::isinf(den)) {
        usable = false;
        break;
      }
      e[i] = std::pow(num / den, 1.0 / lag);
    }
    if (!usable) continue;
    const double spread =
        std::max({std::abs(e[0] - e[1]), std::abs(e[1] - e[2]), std::abs(e[0] - e[2])});
    if (spread <= kCauchyTol * std::abs(e[2])) {
      out.d = e[2];
      out.lag = lag;
      return out;
    }
  }
  out.d = out.table.back().root;
  out.lag = 0;
  out.slow_convergence = true;
  return out;
}

double inverse_radius(const GenInverse& g, const Pencil& P) {
  const double sl = operator_norm(P.S() * g.L);
  if (g.sr_SL <= kZeroRadiusTol * sl) return kInf;
  return 1.0 / g.sr_SL;
}

GenInvResult d_geninv(const Pencil& P, const OptBudget& budget, double radius_hint,
                      const InnerObserver& observer) {
  GenInvResult out;
  out.optimum = minimize_sr(P, budget, radius_hint, observer);
  out.witness = out.optimum.best;
  out.reflexive = out.optimum.best_reflexive;
  out.d = inverse_radius(out.witness, P);
  out.d_reflexive = inverse_radius(out.reflexive, P);
  return out;
}

bool RadiusReport::has_warning(const std::string& code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const ReportWarning& w) { return w.code == code; });
}

namespace {

double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RadiusReport full_report(const Pencil& P, const ReportConfig& config) {
  RadiusReport rep;
  rep.config = config;
  const double eps = config.search.eps_rel;

  std::optional<LimitSpaces> limits;
  try {
    limits = limit_spaces(P, 0, eps);
    rep.k = limits->k;
    rep.stabilized_at = limits->stabilized_at;
    rep.min_gap_ratio = limits->gap_ratio;
  } catch (const Error& e) {
    rep.k = -1;
    rep.errors.push_back(std::string("limit_spaces: ") + e.what());
  }

  rep.seconds_oracle = timed([&] {
    try {
      OracleResult o = d_oracle(P, config.search);
      rep.d_oracle = o.d;
      rep.drop_points = std::move(o.drop_points);
      rep.generic_rank = o.generic_rank;
      rep.rmax = o.rmax;
    } catch (const Error& e) {
      rep.d_oracle = kNaN;
      rep.errors.push_back(std::string("oracle: ") + e.what());
    }
  });

  rep.seconds_bartlay = timed([&] {
    try {
      if (!limits) throw Error("limit spaces unavailable");
      BartLayResult b = d_bartlay(P, *limits, config.m_max, eps);
      rep.d_bartlay = b.d;
      rep.gamma_table = std::move(b.table);
      rep.bartlay_lag = b.lag;
      for (const GammaRow& row : rep.gamma_table)
        rep.min_gap_ratio = std::min(rep.min_gap_ratio, row.gap_ratio);
      if (b.slow_convergence)
        rep.warnings.push_back({"SlowConvergence",
                                "gamma_m ratios did not settle within " +
                                    std::to_string(kCauchyTol) + " by m = " +
                                    std::to_string(config.m_max) +
                                    "; reporting gamma_m^(1/m) instead"});
    } catch (const Error& e) {
      rep.d_bartlay = kNaN;
      rep.errors.push_back(std::string("bartlay: ") + e.what());
    }
  });

  rep.seconds_geninv = timed([&] {
    try {
      OptBudget budget = config.budget;
      budget.eps_rel = eps;
      const double hint = std::isfinite(rep.d_oracle) ? rep.d_oracle : kInf;
      GenInvResult g = d_geninv(P, budget, hint);
      rep.d_geninv = g.d;
      rep.d_geninv_reflexive = g.d_reflexive;
      rep.witness = std::move(g.witness);
      rep.witness_reflexive = std::move(g.reflexive);
      rep.witness_start = g.optimum.nilpotent_refined
                              ? "nilpotent-refinement"
                              : g.optimum.starts[static_cast<std::size_t>(g.optimum.best_start)].kind;
    } catch (const Error& e) {
      rep.d_geninv = kNaN;
      rep.errors.push_back(std::string("geninv: ") + e.what());
    }
  });

  if (rep.k > 0) {
    rep.warnings.insert(
        rep.warnings.begin(),
        {"HypothesisViolated",
         "hypothesis dim N(T−λS) constant fails: stability number k = " +
             std::to_string(rep.k) +
             " is nonzero, so the generalized-inverse estimate is not expected to match "
             "the other two"});
  }
  if (rep.min_gap_ratio < 1e3) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "a rank decision had singular value gap ratio %.3g (below 1e3); subspace "
                  "dimensions may be unreliable",
                  rep.min_gap_ratio);
    rep.warnings.push_back({"IllConditionedRank", buf});
  }
  if (!rep.errors.empty())
    rep.warnings.push_back({"EstimatorFailed", std::to_string(rep.errors.size()) +
                                                   " estimator(s) failed; see errors"});

  if (rep.k == 0 && std::isfinite(rep.d_oracle) && std::isfinite(rep.d_bartlay) &&
      std::isfinite(rep.d_geninv)) {
    rep.has_disagreement = true;
    rep.disagreement.oracle_bartlay = relative_gap(rep.d_oracle, rep.d_bartlay);
    rep.disagreement.oracle_geninv = relative_gap(rep.d_oracle, rep.d_geninv);
    rep.disagreement.bartlay_geninv = relative_gap(rep.d_bartlay, rep.d_geninv);
  }
  if (rep.k == 0 && !std::isnan(rep.d_oracle) && !std::isnan(rep.d_geninv) &&
      std::isfinite(rep.d_oracle)) {
    const double allowed = rep.d_oracle + 1e-6 * (1.0 + rep.d_oracle);
    rep.certificate_holds = rep.d_geninv <= allowed;
    if (!rep.certificate_holds)
      rep.warnings.push_back(
          {"CertificateViolated", "1/r(SL) exceeds the oracle radius; the oracle missed a "
                                  "drop point or the spectral radius was underestimated"});
  }
  return rep;
}

}  // namespace stabrad
