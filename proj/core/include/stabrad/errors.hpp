#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stabrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, ranges or argument values was not met.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative factorization did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what + " (iterations: " + std::to_string(iterations) + ")"),
        iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Two subspaces that were expected to be complementary are not.
class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, double condition)
      : Error(what + " (condition number: " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// The N_m / R_m recursion did not stabilize within the iteration cap.
class NotStabilized : public Error {
 public:
  NotStabilized(const std::string& what, int m_cap)
      : Error(what + " (m_cap: " + std::to_string(m_cap) + ")"), m_cap_(m_cap) {}
  int m_cap() const noexcept { return m_cap_; }

 private:
  int m_cap_;
};

/// dim N(T - lambda S) is not constant on the requested disk.
class ConstancyViolated : public Error {
 public:
  ConstancyViolated(const std::string& what, std::complex<double> at)
      : Error(what), at_(at) {}
  std::complex<double> at() const noexcept { return at_; }

 private:
  std::complex<double> at_;
};

/// No sampled pair of subspaces passed validation.
class NoComplementFound : public Error {
 public:
  NoComplementFound(const std::string& what, std::complex<double> worst)
      : Error(what), worst_(worst) {}
  std::complex<double> worst_lambda() const noexcept { return worst_; }

 private:
  std::complex<double> worst_;
};

/// Random compressions of a non-square pencil disagree about its drop points.
class OracleUnreliable : public Error {
 public:
  using Error::Error;
};

}  // namespace stabrad
