#include "stabrad/pencil_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stabrad {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

namespace {

json real_json(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

double real_from(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(std::string("expected a number for ") + what, 0, 0);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string("expected a [re, im] pair in ") + what, 0, 0);
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ParseError(std::string("non-finite entry in ") + what, 0, 0);
  return z;
}

json matrix_json(const CMatrix& A) {
  json rows = json::array();
  for (Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < A.cols(); ++j) row.push_back(complex_json(A(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from(const json& j, Index rows, Index cols, const char* what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows", 0, 0);
  CMatrix A(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(i) + " must have " +
                           std::to_string(cols) + " entries",
                       0, 0);
    for (Index c = 0; c < cols; ++c) A(i, c) = complex_from(row[static_cast<std::size_t>(c)], what);
  }
  return A;
}

json complex_list_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const Complex& z : v) out.push_back(complex_json(z));
  return out;
}

std::vector<Complex> complex_list_from(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array", 0, 0);
  std::vector<Complex> out;
  for (const json& z : j) out.push_back(complex_from(z, what));
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    throw ParseError("malformed JSON: " + (pos == std::string::npos ? msg : msg.substr(pos)),
                     line, column);
  }
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'", 0, 0);
  return *it;
}

}  // namespace

namespace {

PencilFile parse_pencil_impl(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("pencil file must be a JSON object", 1, 1);
  const json& xd = field(j, "x_dim");
  const json& yd = field(j, "y_dim");
  if (!xd.is_number_integer() || !yd.is_number_integer() || xd.get<long long>() < 1 ||
      yd.get<long long>() < 1)
    throw ParseError("x_dim and y_dim must be positive integers", 0, 0);
  const Index n = xd.get<Index>();
  const Index p = yd.get<Index>();
  CMatrix T = matrix_from(field(j, "T"), p, n, "T");
  CMatrix S = matrix_from(field(j, "S"), p, n, "S");

  PencilMetadata meta;
  if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("metadata must be an object", 0, 0);
    if (auto s = it->find("seed"); s != it->end()) meta.seed = s->get<std::uint64_t>();
    if (auto s = it->find("kind"); s != it->end()) meta.kind = s->get<std::string>();
    if (auto s = it->find("planted_drops"); s != it->end())
      meta.planted_drops = complex_list_from(*s, "planted_drops");
    if (auto s = it->find("planted_k"); s != it->end()) meta.planted_k = s->get<Index>();
  }
  return {Pencil(std::move(T), std::move(S)), std::move(meta)};
}

}  // namespace

PencilFile parse_pencil(const std::string& text) {
  try {
    return parse_pencil_impl(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid pencil file: ") + e.what(), 0, 0);
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("invalid pencil file: ") + e.what(), 0, 0);
  }
}

PencilFile load_pencil(const std::string& path) {
  try {
    return parse_pencil(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line(), e.column());
  }
}

std::string dump_pencil(const PencilFile& file) {
  json j;
  j["x_dim"] = file.pencil.x_dim();
  j["y_dim"] = file.pencil.y_dim();
  j["T"] = matrix_json(file.pencil.T());
  j["S"] = matrix_json(file.pencil.S());
  const PencilMetadata& m = file.metadata;
  if (!m.empty()) {
    json meta = json::object();
    if (m.seed) meta["seed"] = *m.seed;
    if (m.kind) meta["kind"] = *m.kind;
    if (m.planted_drops) meta["planted_drops"] = complex_list_json(*m.planted_drops);
    if (m.planted_k) meta["planted_k"] = *m.planted_k;
    j["metadata"] = meta;
  }
  return j.dump(2) + "\n";
}

void save_pencil(const std::string& path, const PencilFile& file) {
  write_text_file(path, dump_pencil(file));
}

PencilFile to_pencil_file(const GeneratedPencil& g) {
  PencilMetadata meta;
  meta.seed = g.spec.seed;
  meta.kind = to_string(g.spec.kind);
  meta.planted_drops = g.planted_drops;
  meta.planted_k = g.planted_k;
  return {g.pencil, meta};
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json inverse_json(const GenInverse& g) {
  return {{"L", matrix_json(g.L)},
          {"sr_SL", real_json(g.sr_SL)},
          {"certificate", to_string(g.certificate)},
          {"inner_residual", real_json(g.inner_residual)},
          {"outer_residual", real_json(g.outer_residual)},
          {"is_inner", g.is_inner},
          {"is_reflexive", g.is_reflexive}};
}

GenInverse inverse_from(const json& j) {
  GenInverse g;
  const json& L = field(j, "L");
  const Index rows = static_cast<Index>(L.size());
  const Index cols = rows > 0 ? static_cast<Index>(L[0].size()) : 0;
  g.L = matrix_from(L, rows, cols, "witness");
  g.sr_SL = real_from(field(j, "sr_SL"), "sr_SL");
  g.certificate = field(j, "certificate").get<std::string>() == "norm-surrogate"
                      ? RadiusCertificate::NormSurrogate
                      : RadiusCertificate::SpectralRadius;
  g.inner_residual = real_from(field(j, "inner_residual"), "inner_residual");
  g.outer_residual = real_from(field(j, "outer_residual"), "outer_residual");
  g.is_inner = field(j, "is_inner").get<bool>();
  g.is_reflexive = field(j, "is_reflexive").get<bool>();
  return g;
}

}  // namespace

std::string report_to_json(const RadiusReport& r, const ReportOptions& options) {
  json j;
  j["tool"] = {{"name", "stabrad"}, {"version", options.tool_version}};
  const ReportConfig& c = r.config;
  j["config"] = {{"eps_rel", c.search.eps_rel},
                 {"m_max", c.m_max},
                 {"seed", c.search.seed},
                 {"rmax", c.search.rmax > 0.0 ? json(c.search.rmax) : json("auto")},
                 {"budget_starts", c.budget.starts},
                 {"budget_evals", c.budget.evals}};
  j["tolerances"] = {{"drop_tol", kDropTol},
                     {"cluster_tol", kClusterTol},
                     {"cauchy_tol", kCauchyTol},
                     {"zero_radius_tol", kZeroRadiusTol},
                     {"origin_tol", kOriginTol},
                     {"gap_ratio_min", 1e3}};
  j["k"] = r.k;
  j["stabilized_at"] = r.stabilized_at;
  j["min_gap_ratio"] = real_json(r.min_gap_ratio);

  j["oracle"] = {{"d", real_json(r.d_oracle)},
                 {"drop_points", complex_list_json(r.drop_points)},
                 {"generic_rank", r.generic_rank},
                 {"rmax", real_json(r.rmax)}};

  json table = json::array();
  for (const GammaRow& row : r.gamma_table)
    table.push_back({{"m", row.m},
                     {"gamma", real_json(row.gamma)},
                     {"root", real_json(row.root)},
                     {"ratio", real_json(row.ratio)},
                     {"gap_ratio", real_json(row.gap_ratio)}});
  j["bartlay"] = {{"d", real_json(r.d_bartlay)}, {"lag", r.bartlay_lag}, {"table", table}};

  j["geninv"] = {{"d", real_json(r.d_geninv)},
                 {"d_reflexive", real_json(r.d_geninv_reflexive)},
                 {"start", r.witness_start},
                 {"witness", inverse_json(r.witness)},
                 {"reflexive_witness", inverse_json(r.witness_reflexive)}};

  if (r.has_disagreement)
    j["disagreement"] = {{"oracle_bartlay", r.disagreement.oracle_bartlay},
                         {"oracle_geninv", r.disagreement.oracle_geninv},
                         {"bartlay_geninv", r.disagreement.bartlay_geninv}};
  else
    j["disagreement"] = nullptr;
  j["certificate_holds"] = r.certificate_holds;

  json warnings = json::array();
  for (const ReportWarning& w : r.warnings)
    warnings.push_back({{"code", w.code}, {"message", w.message}});
  j["warnings"] = warnings;
  j["errors"] = r.errors;

  if (options.include_timings)
    j["timings_seconds"] = {{"oracle", r.seconds_oracle},
                            {"bartlay", r.seconds_bartlay},
                            {"geninv", r.seconds_geninv}};
  return j.dump(2) + "\n";
}

namespace {

RadiusReport report_from_json_impl(const std::string& text) {
  const json j = parse_json(text);
  RadiusReport r;
  const json& c = field(j, "config");
  r.config.search.eps_rel = field(c, "eps_rel").get<double>();
  r.config.m_max = field(c, "m_max").get<int>();
  r.config.search.seed = field(c, "seed").get<std::uint64_t>();
  const json& rmax = field(c, "rmax");
  r.config.search.rmax = rmax.is_number() ? rmax.get<double>() : 0.0;
  r.config.budget.starts = field(c, "budget_starts").get<int>();
  r.config.budget.evals = field(c, "budget_evals").get<int>();
  r.config.budget.seed = r.config.search.seed;
  r.config.budget.eps_rel = r.config.search.eps_rel;

  r.k = field(j, "k").get<Index>();
  r.stabilized_at = field(j, "stabilized_at").get<int>();
  r.min_gap_ratio = real_from(field(j, "min_gap_ratio"), "min_gap_ratio");

  const json& o = field(j, "oracle");
  r.d_oracle = real_from(field(o, "d"), "oracle.d");
  r.drop_points = complex_list_from(field(o, "drop_points"), "drop_points");
  r.generic_rank = field(o, "generic_rank").get<Index>();
  r.rmax = real_from(field(o, "rmax"), "oracle.rmax");

  const json& b = field(j, "bartlay");
  r.d_bartlay = real_from(field(b, "d"), "bartlay.d");
  r.bartlay_lag = field(b, "lag").get<int>();
  for (const json& row : field(b, "table"))
    r.gamma_table.push_back({field(row, "m").get<int>(), real_from(field(row, "gamma"), "gamma"),
                             real_from(field(row, "root"), "root"),
                             real_from(field(row, "ratio"), "ratio"),
                             real_from(field(row, "gap_ratio"), "gap_ratio")});

  const json& g = field(j, "geninv");
  r.d_geninv = real_from(field(g, "d"), "geninv.d");
  r.d_geninv_reflexive = real_from(field(g, "d_reflexive"), "geninv.d_reflexive");
  r.witness_start = field(g, "start").get<std::string>();
  r.witness = inverse_from(field(g, "witness"));
  r.witness_reflexive = inverse_from(field(g, "reflexive_witness"));

  const json& dis = field(j, "disagreement");
  r.has_disagreement = !dis.is_null();
  if (r.has_disagreement) {
    r.disagreement.oracle_bartlay = field(dis, "oracle_bartlay").get<double>();
    r.disagreement.oracle_geninv = field(dis, "oracle_geninv").get<double>();
    r.disagreement.bartlay_geninv = field(dis, "bartlay_geninv").get<double>();
  }
  r.certificate_holds = field(j, "certificate_holds").get<bool>();
  for (const json& w : field(j, "warnings"))
    r.warnings.push_back({field(w, "code").get<std::string>(), field(w, "message").get<std::string>()});
  r.errors = field(j, "errors").get<std::vector<std::string>>();
  if (auto t = j.find("timings_seconds"); t != j.end()) {
    r.seconds_oracle = field(*t, "oracle").get<double>();
    r.seconds_bartlay = field(*t, "bartlay").get<double>();
    r.seconds_geninv = field(*t, "geninv").get<double>();
  }
  return r;
}

}  // namespace

RadiusReport report_from_json(const std::string& text) {
  try {
    return report_from_json_impl(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid report file: ") + e.what(), 0, 0);
  }
}

std::string gamma_csv(const std::vector<GammaRow>& table) {
  std::string out = "m,gamma_m,gamma_root,gamma_ratio\n";
  for (const GammaRow& row : table)
    out += std::to_string(row.m) + "," + format_real(row.gamma) + "," + format_real(row.root) +
           "," + format_real(row.ratio) + "\n";
  return out;
}

}  // namespace stabrad
