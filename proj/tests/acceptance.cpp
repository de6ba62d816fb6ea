// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "stabrad/errors.hpp"
#include "stabrad/geninv.hpp"
#include "stabrad/pencil_io.hpp"
#include "stabrad/radius.hpp"
#include "support.hpp"

using namespace stabrad;
using namespace stabrad::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    if (pass || detail.size() < 400) detail += (detail.empty() ? "" : "; ") + why;
    pass = false;
  }
  void note(const std::string& s) {
    if (pass) detail = s;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

OptBudget default_budget(std::uint64_t seed) {
  OptBudget b;
  b.seed = seed;
  b.threads = cli::thread_budget();
  return b;
}

// Shared tolerances for criteria 1 and 2.
void check_agreement(const std::string& name, const Pencil& P, double d_true, std::uint64_t seed,
                     Outcome& out, double* worst_geninv) {
  ReportConfig cfg;
  cfg.search.seed = seed;
  cfg.budget = default_budget(seed);
  const RadiusReport r = full_report(P, cfg);
  if (!r.errors.empty()) out.fail(name + ": " + r.errors.front());
  if (!(rel_err(r.d_oracle, d_true) <= 1e-6))
    out.fail(name + fmt(": d_oracle %.10g vs %.10g", r.d_oracle, d_true));
  if (!(rel_err(r.d_bartlay, d_true) <= 2e-2))
    out.fail(name + fmt(": d_bartlay %.10g vs %.10g", r.d_bartlay, d_true));
  if (std::isinf(d_true)) {
    if (!std::isinf(r.d_geninv)) out.fail(name + fmt(": d_geninv %.10g, expected inf", r.d_geninv));
  } else {
    const double lo = d_true * (1.0 - 5e-2);
    if (!(r.d_geninv >= lo)) out.fail(name + fmt(": d_geninv %.10g below %.10g", r.d_geninv, lo));
    if (!(r.d_geninv <= r.d_oracle + 1e-6))
      out.fail(name + fmt(": d_geninv %.10g exceeds d_oracle %.10g", r.d_geninv, r.d_oracle));
    *worst_geninv = std::max(*worst_geninv, 1.0 - r.d_geninv / d_true);
  }
  if (r.k != 0) out.fail(name + ": k = " + std::to_string(r.k));
}

Outcome criterion1() {
  Outcome out;
  double worst = 0.0;
  for (const NamedPencil& np : hand_pencils()) check_agreement(np.name, np.pencil, np.d, 0, out, &worst);
  out.note(fmt("4 pencils; largest relative shortfall of d_geninv %.2e", worst));
  return out;
}

Outcome criterion2() {
  Outcome out;
  int unreliable = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Index n = 3 + static_cast<Index>(i % 4);
    const Planted pl = planted_pencil(1000 + i, n);
    try {
      check_agreement("seed " + std::to_string(1000 + i), pl.gen.pencil, std::abs(pl.nearest), i,
                      out, &worst);
    } catch (const OracleUnreliable& e) {
      ++unreliable;
      out.fail(std::string("OracleUnreliable: ") + e.what());
    }
  }
  // full_report turns estimator errors into entries; catch OracleUnreliable directly too.
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Planted pl = planted_pencil(1000 + i, 3 + static_cast<Index>(i % 4));
    try {
      SearchConfig sc;
      sc.seed = i;
      (void)d_oracle(pl.gen.pencil, sc);
    } catch (const OracleUnreliable& e) {
      ++unreliable;
      out.fail(std::string("OracleUnreliable: ") + e.what());
    }
  }
  out.note(fmt("20 pencils, %g OracleUnreliable; largest relative shortfall of d_geninv %.2e",
               unreliable, worst));
  return out;
}

Outcome criterion3() {
  Outcome out;
  const Pencil P = half_two();
  const LimitSpaces lim = limit_spaces(P);
  double worst = 0.0;
  for (int m = 1; m <= 10; ++m) worst = std::max(worst, rel_err(gamma_m(P, lim, m), std::ldexp(1.0, -m)));
  if (!(worst <= 1e-10)) out.fail(fmt("gamma_m vs 2^-m: %.3e", worst));

  double worst_pow = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(mix_seed(77, s));
    const Index n = 2 + static_cast<Index>(s % 5);
    const CMatrix T = random_gaussian(rng, n, n);
    const Pencil Q(T, identity(n));
    const LimitSpaces l = limit_spaces(Q);
    CMatrix Tm = T;
    for (int m = 1; m <= 8; ++m) {
      if (m > 1) Tm = Tm * T;
      worst_pow = std::max(worst_pow, rel_err(gamma_m(Q, l, m), reduced_min_modulus(Tm)));
    }
  }
  if (!(worst_pow <= 1e-6)) out.fail(fmt("gamma_m(T;I) vs gamma(T^m): %.3e", worst_pow));
  out.note(fmt("2^-m max rel err %.2e; gamma(T^m) max rel err %.2e", worst, worst_pow));
  return out;
}

Outcome criterion4() {
  Outcome out;
  double worst[4] = {0, 0, 0, 0};
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Pencil P = random_k0_pencil(500 + s);
    SearchConfig sc;
    sc.seed = s;
    const OracleResult o = d_oracle(P, sc);
    const double radius = std::isfinite(o.d) ? 0.9 * o.d : 1.0;
    ComplementSearch cs;
    cs.radius = radius;
    cs.seed = s;
    try {
      const Resolvent R(P, find_fixed_complements(P, cs));
      Rng rng(mix_seed(s, 99));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < 20; ++i) {
        const Complex l = std::polar(radius * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
        const Complex m = std::polar(radius * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
        const ResolventResiduals r = verify_resolvent(R, l * 0.999, m * 0.999);
        worst[0] = std::max(worst[0], r.inner);
        worst[1] = std::max(worst[1], r.outer);
        worst[2] = std::max(worst[2], r.identity);
      }
      const CMatrix G0 = R(0.0);
      CMatrix expected = G0;
      for (int n = 0; n <= 4; ++n) {
        if (n > 0) expected = expected * (P.S() * G0);
        const CMatrix Gn = resolvent_taylor_coefficient(R, n, 0.5 * radius);
        worst[3] = std::max(worst[3], operator_norm(Gn - expected) /
                                          std::max(1.0, operator_norm(expected)));
      }
    } catch (const Error& e) {
      out.fail("pencil " + std::to_string(s) + ": " + e.what());
    }
  }
  if (!(worst[0] <= 1e-7 && worst[1] <= 1e-7 && worst[2] <= 1e-7))
    out.fail(fmt("residuals inner %.2e outer %.2e identity %.2e", worst[0], worst[1], worst[2]));
  if (!(worst[3] <= 1e-6)) out.fail(fmt("Taylor recurrence %.2e", worst[3]));
  out.note(fmt("10 pencils x 20 pairs: max residuals %.1e / %.1e / %.1e", worst[0], worst[1], worst[2]) +
           fmt("; Taylor %.1e", worst[3]));
  return out;
}

Outcome criterion5() {
  Outcome out;
  double worst_chain = 0.0;
  double worst_neumann = 0.0;
  std::size_t checked = 0;
  std::vector<Pencil> pencils = {swap_s(), half_two(), rect_2x3()};
  for (std::uint64_t s = 0; s < 3; ++s) pencils.push_back(random_k0_pencil(800 + s));
  for (std::size_t idx = 0; idx < pencils.size(); ++idx) {
    const Pencil& P = pencils[idx];
    const LimitSpaces lim = limit_spaces(P);
    double gamma[7];
    for (int m = 1; m <= 6; ++m) gamma[m] = gamma_m(P, lim, m);
    std::vector<CMatrix> seen;
    std::size_t count = 0;
    OptBudget budget = default_budget(idx);
    budget.starts = 8;
    budget.evals = 800;
    const SrOptimum opt = minimize_sr(P, budget, kInf, [&](const CMatrix& L) {
      if (count++ % 97 == 0) seen.push_back(L);
    });
    seen.push_back(opt.best.L);
    seen.push_back(opt.best_reflexive.L);
    Rng rng(mix_seed(idx, 5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const CMatrix& L : seen) {
      const GenInverse g = classify(P, L);
      if (!g.is_inner) continue;
      ++checked;
      CMatrix F = L;
      const CMatrix SL = P.S() * L;
      for (int m = 1; m <= 6; ++m) {
        if (m > 1) F = F * SL;
        const double prod = gamma[m] * operator_norm(F);
        worst_chain = std::max(worst_chain, 1.0 - prod);
      }
      const double alpha = neumann_alpha(P, L);
      const double reach = std::isfinite(alpha) ? 0.9 * alpha : 1.0;
      for (int i = 0; i < 4; ++i) {
        const Complex z = std::polar(reach * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
        worst_neumann = std::max(worst_neumann, neumann_inner_residual(P, L, z));
      }
    }
  }
  if (!(worst_chain <= 1e-6)) out.fail(fmt("chain bound shortfall %.3e", worst_chain));
  if (!(worst_neumann <= 1e-7)) out.fail(fmt("Neumann residual %.3e", worst_neumann));
  out.note(fmt("%g inner inverses from the optimizer; 1 - gamma_m ||F_{m-1}|| <= %.1e; Neumann %.1e",
               static_cast<double>(checked), worst_chain, worst_neumann));
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("stabrad_acceptance_" + name)).string();
}

int run_cli(const std::vector<std::string>& args, std::string* stdout_text) {
  std::vector<const char*> argv{"pencil-radius"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (stdout_text) *stdout_text = out.str() + err.str();
  return code;
}

Outcome criterion6() {
  Outcome out;
  const Pencil P = k_positive();
  ReportConfig cfg;
  cfg.budget = default_budget(0);
  const RadiusReport r = full_report(P, cfg);
  if (r.k != 1) out.fail("k = " + std::to_string(r.k));
  if (!(std::abs(r.d_oracle - 1.0) <= 1e-6)) out.fail(fmt("d_oracle %.10g", r.d_oracle));
  if (!(std::abs(r.d_bartlay - 1.0) <= 1e-6)) out.fail(fmt("d_bartlay %.10g", r.d_bartlay));
  if (!(r.witness.is_inner && r.witness.sr_SL <= 1e-8))
    out.fail(fmt("best r(SL) = %.3e", r.witness.sr_SL));
  if (!std::isinf(r.d_geninv)) out.fail(fmt("d_geninv %.10g, expected inf", r.d_geninv));
  if (!r.has_warning("HypothesisViolated")) out.fail("no HypothesisViolated warning");

  const std::string path = temp_path("k_positive.json");
  save_pencil(path, {P, {}});
  std::string text;
  const int code = run_cli({"radius", path}, &text);
  if (code != 2) out.fail("exit code " + std::to_string(code));
  if (text.find("HypothesisViolated") == std::string::npos ||
      text.find("hypothesis dim N(T−λS) constant fails") == std::string::npos)
    out.fail("CLI output lacks the hypothesis warning");
  std::filesystem::remove(path);
  out.note(fmt("k = 1, d_oracle = %.9f, d_bartlay = %.9f, ", r.d_oracle, r.d_bartlay) +
           fmt("r(SL) = %.1e, exit code %g", r.witness.sr_SL, code));
  return out;
}

Outcome criterion7() {
  Outcome out;
  const std::string in = temp_path("swap.json");
  const std::string a = temp_path("report_a.json");
  const std::string b = temp_path("report_b.json");
  save_pencil(in, {swap_s(), {}});
  const std::vector<std::string> base = {"radius", in, "--seed", "42", "--json-out"};
  auto with = [&](const std::string& o) {
    std::vector<std::string> v = base;
    v.push_back(o);
    return v;
  };
  const int ca = run_cli(with(a), nullptr);
  const int cb = run_cli(with(b), nullptr);
  if (ca != 0 || cb != 0) out.fail("exit codes " + std::to_string(ca) + ", " + std::to_string(cb));
  const std::string ta = read_text_file(a);
  const std::string tb = read_text_file(b);
  if (ta != tb) out.fail("reports differ");
  if (ta.empty()) out.fail("empty report");
  for (const std::string& p : {in, a, b}) std::filesystem::remove(p);
  out.note(std::to_string(ta.size()) + " bytes, identical");
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "three-way agreement on hand-derived pencils", criterion1},
      {2, "planted corpus of 20 generated pencils", criterion2},
      {3, "exact gamma sequence and gamma_m(T;I) = gamma(T^m)", criterion3},
      {4, "generalized resolvent residuals and Taylor recurrence", criterion4},
      {5, "chain bound and Neumann identity for optimizer inverses", criterion5},
      {6, "hypothesis gate on the k = 1 pencil", criterion6},
      {7, "byte-identical reports for a fixed seed", criterion7},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
