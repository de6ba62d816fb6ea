#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "stabrad/matrixcore.hpp"

namespace stabrad {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
inline CMatrix random_gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      A(i, j) = Complex(re, im);
    }
  return A;
}

/// Orthonormal basis of a subspace drawn from the unitarily invariant distribution.
inline CMatrix random_orthonormal(Rng& rng, Index ambient, Index dim) {
  if (dim == 0) return CMatrix(ambient, 0);
  return orthonormalize(random_gaussian(rng, ambient, dim));
}

}  // namespace stabrad
