#pragma once

// The three stability-radius estimators and the report that compares them.

#include <cstdint>
#include <string>
#include <vector>

#include "stabrad/geninv.hpp"
#include "stabrad/matrixcore.hpp"
#include "stabrad/pencil.hpp"

namespace stabrad {

/// Fixed tolerances used by the estimators; echoed in every report.
inline constexpr double kDropTol = 1e-7;         ///< sigma_rho < kDropTol * sigma_max
inline constexpr double kClusterTol = 1e-6;      ///< root matching across compressions
inline constexpr double kCauchyTol = 1e-3;       ///< ratio sequence stabilization
inline constexpr double kZeroRadiusTol = 1e-8;   ///< r(S L) <= this * ||S L|| counts as 0
inline constexpr double kOriginTol = 1e-9;       ///< drop points this close to 0 sit at the centre

struct SearchConfig {
  double rmax = 0.0;  ///< <= 0 selects the automatic bound
  std::uint64_t seed = 0;
  double eps_rel = kDefaultEpsRel;
};

struct OracleResult {
  double d = kInf;
  std::vector<Complex> drop_points;  ///< ascending modulus, including any at the origin
  Index generic_rank = 0;
  double rmax = kInf;  ///< search bound actually used
};

/// Locates every lambda with rank(T - lambda S) below the generic rank and
/// returns the smallest nonzero modulus among them.
/// Throws OracleUnreliable when random compressions disagree.
OracleResult d_oracle(const Pencil& P, const SearchConfig& search = {});

struct GammaRow {
  int m = 0;
  double gamma = kInf;
  double root = kInf;   ///< gamma_m^{1/m}
  double ratio = kInf;  ///< gamma_{m+1} / gamma_m
  double gap_ratio = kInf;
};

struct BartLayResult {
  double d = kInf;
  std::vector<GammaRow> table;  ///< m = 1 ... m_max
  /// 1 or 2 when the lagged ratio (gamma_m / gamma_{m-lag})^{1/lag} settled,
  /// 0 when the estimate fell back to gamma_m^{1/m}.
  int lag = 0;
  bool slow_convergence = false;
};

/// gamma_m for m = 1 ... m_max + 1 and the limit estimate.
BartLayResult d_bartlay(const Pencil& P, int m_max = 12, double eps_rel = kDefaultEpsRel);
BartLayResult d_bartlay(const Pencil& P, const LimitSpaces& limits, int m_max = 12,
                        double eps_rel = kDefaultEpsRel);

struct GenInvResult {
  double d = kInf;            ///< 1 / r(S L) for the best inner inverse
  double d_reflexive = kInf;  ///< same for its reflexive closure
  GenInverse witness;
  GenInverse reflexive;
  SrOptimum optimum;
};

/// 1 / r(S L) over the inner inverses visited by minimize_sr.
GenInvResult d_geninv(const Pencil& P, const OptBudget& budget, double radius_hint = kInf,
                      const InnerObserver& observer = {});

/// 1 / r, with r <= kZeroRadiusTol * ||S L|| mapped to +inf.
double inverse_radius(const GenInverse& g, const Pencil& P);

struct ReportConfig {
  SearchConfig search;
  int m_max = 12;
  OptBudget budget;
};

struct ReportWarning {
  std::string code;  ///< HypothesisViolated, IllConditionedRank, SlowConvergence, ...
  std::string message;
};

struct Disagreement {
  double oracle_bartlay = 0.0;
  double oracle_geninv = 0.0;
  double bartlay_geninv = 0.0;
};

struct RadiusReport {
  double d_oracle = kInf;
  std::vector<Complex> drop_points;
  Index generic_rank = 0;
  double rmax = kInf;

  double d_bartlay = kInf;
  std::vector<GammaRow> gamma_table;
  int bartlay_lag = 0;

  double d_geninv = kInf;
  double d_geninv_reflexive = kInf;
  GenInverse witness;
  GenInverse witness_reflexive;
  std::string witness_start;

  Index k = 0;
  int stabilized_at = 0;
  double min_gap_ratio = kInf;

  bool has_disagreement = false;  ///< set when k = 0 and every estimate is finite
  Disagreement disagreement;
  bool certificate_holds = true;  ///< d_geninv <= d_oracle + tol when k = 0

  std::vector<ReportWarning> warnings;
  std::vector<std::string> errors;  ///< estimator failures, "<estimator>: <message>"

  ReportConfig config;
  /// Seconds spent in each estimator (oracle, bartlay, geninv).
  double seconds_oracle = 0.0;
  double seconds_bartlay = 0.0;
  double seconds_geninv = 0.0;

  bool has_warning(const std::string& code) const;
};

/// Runs the limit spaces and the three estimators. Estimator failures become
/// entries in `errors` (with the estimate set to NaN) instead of exceptions.
RadiusReport full_report(const Pencil& P, const ReportConfig& config = {});

}  // namespace stabrad
