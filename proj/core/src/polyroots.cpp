#include "stabrad/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stabrad/errors.hpp"

namespace stabrad {

std::vector<Complex> det_polynomial(const CMatrix& A, const CMatrix& B, int degree,
                                    double radius) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
    throw ContractViolation("det_polynomial: expected two square matrices of equal size");
  if (degree < 0) throw ContractViolation("det_polynomial: negative degree");
  const int N = degree + 1;
  std::vector<Complex> values(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const Complex z = std::polar(radius, 2.0 * std::numbers::pi * j / N);
    values[static_cast<std::size_t>(j)] = A.rows() == 0
                                              ? Complex(1.0)
                                              : Eigen::PartialPivLU<CMatrix>(A - z * B).determinant();
  }
  std::vector<Complex> coeffs(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < N; ++j)
      acc += values[static_cast<std::size_t>(j)] *
             std::polar(1.0, -2.0 * std::numbers::pi * ((static_cast<long>(j) * k) % N) / N);
    coeffs[static_cast<std::size_t>(k)] = acc / (static_cast<double>(N) * std::pow(radius, k));
  }
  return coeffs;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, double rel_trim) {
  double biggest = 0.0;
  for (const Complex& c : coeffs) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0.0) return {};
  std::size_t deg = coeffs.size();
  while (deg > 0 && std::abs(coeffs[deg - 1]) <= rel_trim * biggest) --deg;
  if (deg <= 1) return {};
  --deg;  // index of the leading coefficient == degree
  const Index d = static_cast<Index>(deg);
  CMatrix companion = CMatrix::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < d; ++i)
    companion(i, d - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[deg];
  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("polynomial_roots: companion eigenvalues did not converge",
                           static_cast<int>(30 * d));
  std::vector<Complex> roots(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  return roots;
}

Complex refine_det_root(const CMatrix& A, const CMatrix& B, Complex lambda, int max_iter) {
  const Complex start = lambda;
  const double leash = 1e-2 * (1.0 + std::abs(start));
  for (int it = 0; it < max_iter; ++it) {
    Eigen::PartialPivLU<CMatrix> lu(A - lambda * B);
    const Complex trace = lu.solve(B).trace();
    if (!std::isfinite(trace.real()) || !std::isfinite(trace.imag()) || trace == 0.0) break;
    const Complex step = 1.0 / trace;
    lambda += step;
    if (std::abs(lambda - start) > leash) return start;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(lambda))) break;
  }
  return lambda;
}

std::vector<Complex> det_roots(const CMatrix& A, const CMatrix& B) {
  const int n = static_cast<int>(A.rows());
  std::vector<Complex> roots = polynomial_roots(det_polynomial(A, B, n));
  for (Complex& r : roots) r = refine_det_root(A, B, r);
  return roots;
}

}  // namespace stabrad
