#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stabrad/pencil.hpp"

namespace stabrad::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, FailAsExpected, Skip, Info };

const char* to_string(CheckStatus s);

struct CheckLine {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double residual = 0.0;
  double tol = 0.0;
  std::string note;
};

struct CheckConfig {
  int samples = 64;
  std::uint64_t seed = 0;
  double eps_rel = 1e-10;
  int pairs = 20;
};

/// Resolvent, Taylor, Neumann, chain-bound and limit-space identities for one pencil.
/// Failures that the stability number predicts (k != 0) come back as FailAsExpected.
std::vector<CheckLine> run_checks(const Pencil& P, const CheckConfig& config);

/// Threads for the optimizer: hardware concurrency capped by PENCIL_RADIUS_THREADS.
int thread_budget();

/// Entry point shared by main() and the tests. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stabrad::cli
