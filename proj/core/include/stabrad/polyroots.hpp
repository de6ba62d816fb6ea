#pragma once

// Roots of det(A - lambda B) for square pencils through interpolation on a
// circle and a companion matrix, with Newton refinement on the determinant.

#include <vector>

#include "stabrad/matrixcore.hpp"

namespace stabrad {

/// Coefficients a_0..a_degree of the polynomial det(A - lambda B), recovered from
/// degree + 1 samples at radius * (roots of unity).
std::vector<Complex> det_polynomial(const CMatrix& A, const CMatrix& B, int degree,
                                    double radius = 1.0);

/// Roots of sum_k a_k lambda^k. Leading coefficients below rel_trim * max|a_k|
/// are dropped first. Returns an empty list for a (numerically) constant polynomial.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs,
                                      double rel_trim = 1e-12);

/// Newton iteration lambda += 1 / tr((A - lambda B)^{-1} B) on det(A - lambda B).
/// Returns the starting point if the iteration wanders off.
Complex refine_det_root(const CMatrix& A, const CMatrix& B, Complex lambda,
                        int max_iter = 40);

/// Finite roots of det(A - lambda B), refined. A and B must be square.
std::vector<Complex> det_roots(const CMatrix& A, const CMatrix& B);

}  // namespace stabrad
