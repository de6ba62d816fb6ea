#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "stabrad/errors.hpp"
#include "stabrad/generate.hpp"
#include "stabrad/pencil_io.hpp"
#include "stabrad/radius.hpp"

namespace stabrad::cli {

int thread_budget() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("PENCIL_RADIUS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min<long>(threads, cap);
  }
  return threads;
}

namespace {

std::string fixed(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string summary_line(const RadiusReport& r) {
  const char* rel = std::isinf(r.d_oracle) ? "=" : "≈";
  return std::string("d ") + rel + " " + fixed(r.d_oracle, 6) + " (oracle) | " +
         fixed(r.d_bartlay, 2) + " (bart-lay) | " + fixed(r.d_geninv, 6) +
         " (gen-inv), k=" + std::to_string(r.k);
}

std::vector<Complex> parse_drops(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    // "re" or "re:im"
    const auto colon = tok.find(':');
    try {
      std::size_t used = 0;
      if (colon == std::string::npos) {
        const double re = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.emplace_back(re, 0.0);
      } else {
        const std::string a = tok.substr(0, colon);
        const std::string b = tok.substr(colon + 1);
        std::size_t ua = 0;
        std::size_t ub = 0;
        const double re = std::stod(a, &ua);
        const double im = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size()) throw std::invalid_argument(tok);
        out.emplace_back(re, im);
      }
    } catch (const std::logic_error&) {
      throw ContractViolation("invalid drop point '" + tok + "' (expected re or re:im)");
    }
  }
  return out;
}

struct Flags {
  std::string input;
  std::string output;
  double eps_rel = kDefaultEpsRel;
  int m_max = 12;
  int samples = 64;
  std::uint64_t seed = 0;
  int budget_starts = 24;
  int budget_evals = 2000;
  double rmax = 0.0;
  std::string csv;
  std::string json_out;
  bool timings = false;
  // gen
  Index n = 4;
  Index p = 4;
  std::string drops;
  std::string kind = "regular";
};

int cmd_radius(const Flags& f, std::ostream& out, std::ostream& err) {
  const PencilFile file = load_pencil(f.input);
  ReportConfig config;
  config.search.eps_rel = f.eps_rel;
  config.search.seed = f.seed;
  config.search.rmax = f.rmax;
  config.m_max = f.m_max;
  config.budget.starts = f.budget_starts;
  config.budget.evals = f.budget_evals;
  config.budget.seed = f.seed;
  config.budget.eps_rel = f.eps_rel;
  config.budget.threads = thread_budget();

  const RadiusReport report = full_report(file.pencil, config);
  ReportOptions options;
  options.tool_version = kToolVersion;
  options.include_timings = f.timings;
  const std::string text = report_to_json(report, options);
  if (!f.json_out.empty()) {
    if (f.json_out == "-")
      out << text;
    else
      write_text_file(f.json_out, text);
  }

  out << summary_line(report) << "\n";
  for (const ReportWarning& w : report.warnings)
    out << "warning [" << w.code << "]: " << w.message << "\n";
  for (const std::string& e : report.errors) err << "error: " << e << "\n";

  if (report.has_warning("HypothesisViolated")) return 2;
  return report.errors.empty() ? 0 : 1;
}

int cmd_gamma_seq(const Flags& f, std::ostream& out) {
  const PencilFile file = load_pencil(f.input);
  const BartLayResult b = d_bartlay(file.pencil, f.m_max, f.eps_rel);
  const std::string csv = gamma_csv(b.table);
  if (f.csv.empty() || f.csv == "-") {
    out << csv;
  } else {
    write_text_file(f.csv, csv);
    out << "d_bartlay = " << format_real(b.d) << (b.slow_convergence ? " (slow convergence)" : "")
        << "\n";
  }
  return 0;
}

int cmd_check(const Flags& f, std::ostream& out) {
  const PencilFile file = load_pencil(f.input);
  CheckConfig config;
  config.samples = f.samples;
  config.seed = f.seed;
  config.eps_rel = f.eps_rel;
  int failures = 0;
  for (const CheckLine& line : run_checks(file.pencil, config)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-17s", to_string(line.status));
    out << buf << line.name;
    if (line.status != CheckStatus::Skip && line.status != CheckStatus::Info) {
      char nums[96];
      std::snprintf(nums, sizeof nums, "  residual=%.3e tol=%.1e", line.residual, line.tol);
      out << nums;
    }
    if (!line.note.empty()) out << "  (" << line.note << ")";
    out << "\n";
    if (line.status == CheckStatus::Fail) ++failures;
  }
  out << (failures == 0 ? "all checks behave as expected" : std::to_string(failures) + " check(s) failed")
      << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_gen(const Flags& f, std::ostream& out) {
  GenSpec spec;
  spec.kind = parse_gen_kind(f.kind);
  spec.n = f.n;
  spec.p = f.p;
  spec.drops = parse_drops(f.drops);
  spec.seed = f.seed;
  const GeneratedPencil g = generate(spec);
  save_pencil(f.output, to_pencil_file(g));
  out << "wrote " << f.output << " (" << to_string(spec.kind) << ", " << g.pencil.y_dim() << "x"
      << g.pencil.x_dim() << ", k=" << g.planted_k << ")\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability radius of a matrix pencil T - lambda S", "pencil-radius"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--eps-rel", f.eps_rel, "Relative rank tolerance")->capture_default_str();
  };

  CLI::App* radius = app.add_subcommand("radius", "Compute the three stability-radius estimates");
  radius->add_option("input", f.input, "Pencil JSON file")->required();
  add_common(radius);
  radius->add_option("--m-max", f.m_max, "Longest chain length")->capture_default_str();
  radius->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  radius->add_option("--budget-starts", f.budget_starts, "Optimizer starts")->capture_default_str();
  radius->add_option("--budget-evals", f.budget_evals, "Evaluations per start")
      ->capture_default_str();
  radius->add_option("--rmax", f.rmax, "Oracle search radius (default: automatic)");
  radius->add_option("--json-out", f.json_out, "Write the JSON report here ('-' for stdout)");
  radius->add_flag("--timings", f.timings, "Include wall-clock seconds per estimator");

  CLI::App* gamma = app.add_subcommand("gamma-seq", "Tabulate gamma_m and its limit estimates");
  gamma->add_option("input", f.input, "Pencil JSON file")->required();
  add_common(gamma);
  gamma->add_option("--m-max", f.m_max, "Longest chain length")->capture_default_str();
  gamma->add_option("--csv", f.csv, "Write the CSV table here (default: stdout)");

  CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("input", f.input, "Pencil JSON file")->required();
  add_common(check);
  check->add_option("--samples", f.samples, "Disk samples for complement checks")
      ->capture_default_str();
  check->add_option("--seed", f.seed, "Random seed")->capture_default_str();

  CLI::App* gen = app.add_subcommand("gen", "Generate a pencil with planted drop points");
  gen->add_option("output", f.output, "Output pencil JSON file")->required();
  gen->add_option("--seed", f.seed, "Random seed")->required();
  gen->add_option("--n", f.n, "x dimension")->capture_default_str();
  gen->add_option("--p", f.p, "y dimension")->capture_default_str();
  gen->add_option("--drops", f.drops, "Comma-separated drop points, re or re:im");
  gen->add_option("--kind", f.kind, "regular, rectangular or k-positive")
      ->check(CLI::IsMember({"regular", "rectangular", "k-positive"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*radius) return cmd_radius(f, out, err);
    if (*gamma) return cmd_gamma_seq(f, out);
    if (*check) return cmd_check(f, out);
    if (*gen) return cmd_gen(f, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace stabrad::cli
