#include <algorithm>
#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "stabrad/errors.hpp"
#include "stabrad/geninv.hpp"
#include "stabrad/radius.hpp"
#include "stabrad/random.hpp"
#include "stabrad/subspace.hpp"

namespace stabrad::cli {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::FailAsExpected:
      return "FAIL-AS-EXPECTED";
    case CheckStatus::Skip:
      return "SKIP";
    case CheckStatus::Info:
      return "INFO";
  }
  return "?";
}

namespace {

// Largest distance from a unit basis vector of V to W.
double excess(const Subspace& V, const Subspace& W) {
  double worst = 0.0;
  for (Index j = 0; j < V.dim(); ++j) worst = std::max(worst, distance(V.basis.col(j), W));
  return worst;
}

class Recorder {
 public:
  Recorder(std::vector<CheckLine>& lines, bool hypothesis_holds)
      : lines_(lines), hypothesis_holds_(hypothesis_holds) {}

  void bound(const std::string& name, double residual, double tol, std::string note = {}) {
    CheckStatus s = residual <= tol ? CheckStatus::Pass
                                    : (hypothesis_holds_ ? CheckStatus::Fail
                                                         : CheckStatus::FailAsExpected);
    lines_.push_back({name, s, residual, tol, std::move(note)});
  }

  void failed(const std::string& name, const std::string& why) {
    lines_.push_back({name, hypothesis_holds_ ? CheckStatus::Fail : CheckStatus::FailAsExpected,
                      kInf, 0.0, why});
  }

 private:
  std::vector<CheckLine>& lines_;
  bool hypothesis_holds_;
};

}  // namespace

std::vector<CheckLine> run_checks(const Pencil& P, const CheckConfig& config) {
  std::vector<CheckLine> lines;
  const CMatrix& T = P.T();
  const CMatrix& S = P.S();

  LimitSpaces lim;
  try {
    lim = limit_spaces(P, 0, config.eps_rel);
  } catch (const Error& e) {
    lines.push_back({"limit spaces", CheckStatus::Fail, kInf, 0.0, e.what()});
    return lines;
  }
  const bool k_zero = lim.k == 0;
  Recorder rec(lines, k_zero);
  lines.push_back({"stability number k = " + std::to_string(lim.k), CheckStatus::Info, 0.0, 0.0,
                   k_zero ? "" : "hypothesis dim N(T−λS) constant fails"});

  // Limit-space identities.
  const Subspace TX = image(T, lim.x_inf, config.eps_rel);
  rec.bound("T X_inf within Y_inf", excess(TX, lim.y_inf), 1e-8);
  rec.bound("Y_inf within T X_inf", excess(lim.y_inf, TX), 1e-8);
  const Subspace SY = preimage(S, lim.y_inf, config.eps_rel);
  rec.bound("S^-1 Y_inf within X_inf", excess(SY, lim.x_inf), 1e-8);
  rec.bound("X_inf within S^-1 Y_inf", excess(lim.x_inf, SY), 1e-8);
  rec.bound("S X_inf within Y_inf", excess(image(S, lim.x_inf, config.eps_rel), lim.y_inf), 1e-8);
  rec.bound("N(T) within X_inf", excess(lim.kernel_T, lim.x_inf), 1e-8);

  // Facts about an inner inverse that hold exactly when k = 0.
  const CMatrix L = pseudo_inverse(T, config.eps_rel);
  const Index n = P.x_dim();
  {
    const CMatrix stepA = S * (CMatrix::Identity(n, n) - L * T);
    rec.bound("S (I - LT) X within Y_inf", excess(range(stepA, config.eps_rel, 1.0 + operator_norm(S)), lim.y_inf),
              1e-8);
    rec.bound("L Y_inf within X_inf", excess(image(L, lim.y_inf, config.eps_rel), lim.x_inf), 1e-8);
    rec.bound("S L Y_inf within Y_inf", excess(image(S * L, lim.y_inf, config.eps_rel), lim.y_inf),
              1e-8);
    double id_res = 0.0;
    if (lim.y_inf.dim() > 0)
      id_res = operator_norm(T * L * lim.y_inf.basis - lim.y_inf.basis);
    rec.bound("T L = I on Y_inf", id_res, 1e-8);
  }

  // Neumann family F(lambda) = L (I - lambda S L)^{-1}.
  const double alpha = neumann_alpha(P, L);
  Rng rng(mix_seed(config.seed, 0xC4EC));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  {
    const double reach = std::isfinite(alpha) ? 0.9 * alpha : 1.0;
    double worst = 0.0;
    for (int i = 0; i < config.pairs; ++i) {
      const Complex z = std::polar(reach * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
      worst = std::max(worst, neumann_inner_residual(P, L, z));
    }
    rec.bound("Neumann inner identity, |lambda| <= 0.9 alpha", worst, 1e-7);
  }

  // gamma_m ||L (S L)^{m-1}|| >= 1.
  {
    double worst = 0.0;
    CMatrix F = L;
    const CMatrix SL = S * L;
    for (int m = 1; m <= 6; ++m) {
      if (m > 1) F = F * SL;
      const double g = gamma_m(P, lim, m, config.eps_rel);
      const double prod = g * operator_norm(F);
      if (!(prod >= 1.0)) worst = std::max(worst, 1.0 - prod);
    }
    rec.bound("gamma_m ||L (SL)^(m-1)|| >= 1, m <= 6", worst, 1e-6);
  }

  // Generalized resolvent from fixed complements.
  double radius = 1.0;
  double d_or = kInf;
  try {
    SearchConfig sc;
    sc.seed = config.seed;
    sc.eps_rel = config.eps_rel;
    const OracleResult o = d_oracle(P, sc);
    d_or = o.d;
    if (std::isfinite(o.d)) radius = 0.9 * o.d;
  } catch (const Error& e) {
    rec.failed("oracle radius", e.what());
  }
  try {
    ComplementSearch search;
    search.radius = radius;
    search.n_samples = config.samples;
    search.seed = config.seed;
    search.eps_rel = config.eps_rel;
    const Resolvent R(P, find_fixed_complements(P, search));
    const double reach = 0.9 * radius;
    double inner = 0.0;
    double outer = 0.0;
    double ident = 0.0;
    const ResolventResiduals same = verify_resolvent(R, 0.5 * reach, 0.5 * reach);
    rec.bound("resolvent identity at lambda = mu", same.identity, 0.0);
    for (int i = 0; i < config.pairs; ++i) {
      const Complex l = std::polar(reach * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
      const Complex m = std::polar(reach * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
      const ResolventResiduals r = verify_resolvent(R, l, m);
      inner = std::max(inner, r.inner);
      outer = std::max(outer, r.outer);
      ident = std::max(ident, r.identity);
    }
    rec.bound("resolvent inner identity", inner, 1e-7);
    rec.bound("resolvent outer identity", outer, 1e-7);
    rec.bound("resolvent identity", ident, 1e-7);

    const CMatrix G0 = R(0.0);
    CMatrix expected = G0;
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
      if (k > 0) expected = expected * (S * G0);
      const CMatrix Gk = resolvent_taylor_coefficient(R, k, 0.5 * radius);
      worst = std::max(worst, operator_norm(Gk - expected) / std::max(1.0, operator_norm(expected)));
    }
    rec.bound("Taylor coefficients G_n = G_0 (S G_0)^n, n <= 4", worst, 1e-6);
    const double inv = 1.0 / certified_spectral_radius(S * G0);
    if (std::isfinite(d_or))
      rec.bound("1 / r(S G_0) at most the oracle radius", std::max(0.0, inv - d_or),
                1e-6 * (1.0 + d_or));
  } catch (const ConstancyViolated& e) {
    rec.failed("generalized resolvent", e.what());
  } catch (const Error& e) {
    rec.failed("generalized resolvent", e.what());
  }
  return lines;
}

}  // namespace stabrad::cli
