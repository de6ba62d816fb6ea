#pragma once

// JSON pencil files, JSON reports and the gamma CSV table.
//
// Pencil file layout (keys sorted, matrices row-major, entries [re, im]):
//   {"S": [[[re, im], ...], ...], "T": [...], "metadata": {...}, "x_dim": n, "y_dim": p}

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stabrad/errors.hpp"
#include "stabrad/generate.hpp"
#include "stabrad/pencil.hpp"
#include "stabrad/radius.hpp"

namespace stabrad {

/// Malformed input. line and column are 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(line > 0 ? what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)
                       : what),
        detail_(what),
        line_(line),
        column_(column) {}
  /// Message without the location suffix.
  const std::string& detail() const noexcept { return detail_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

struct PencilMetadata {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind;
  std::optional<std::vector<Complex>> planted_drops;
  std::optional<Index> planted_k;

  bool empty() const { return !seed && !kind && !planted_drops && !planted_k; }
};

struct PencilFile {
  Pencil pencil;
  PencilMetadata metadata;
};

PencilFile parse_pencil(const std::string& text);
PencilFile load_pencil(const std::string& path);
/// Canonical text: sorted keys, two-space indent, shortest round-trip floats, trailing newline.
std::string dump_pencil(const PencilFile& file);
void save_pencil(const std::string& path, const PencilFile& file);

PencilFile to_pencil_file(const GeneratedPencil& g);

struct ReportOptions {
  std::string tool_version;
  bool include_timings = false;
};

/// Infinite values are written as the strings "inf" / "-inf", NaN as "nan".
std::string report_to_json(const RadiusReport& report, const ReportOptions& options);
RadiusReport report_from_json(const std::string& text);

/// Header m,gamma_m,gamma_root,gamma_ratio; values with 17 significant digits.
std::string gamma_csv(const std::vector<GammaRow>& table);

/// %.17g, with inf / -inf / nan spelled out.
std::string format_real(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stabrad
