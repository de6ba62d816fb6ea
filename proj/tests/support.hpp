#pragma once

// Shared fixtures: the hand-worked pencils and seeded random pencils with k = 0.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "stabrad/generate.hpp"
#include "stabrad/matrixcore.hpp"
#include "stabrad/pencil.hpp"
#include "stabrad/random.hpp"

namespace stabrad::testing {

inline Pencil swap_s() { return {make_matrix({{1, 0}, {0, 2}}), make_matrix({{0, 1}, {1, 0}})}; }
inline Pencil half_two() { return {make_matrix({{0.5, 0}, {0, 2}}), identity(2)}; }
inline Pencil rect_2x3() {
  return {make_matrix({{1, 0, 0}, {0, 1, 0}}), make_matrix({{0, 0, 0}, {-1, 1, 0}})};
}
inline Pencil identity_zero() { return {identity(2), CMatrix::Zero(2, 2)}; }
inline Pencil k_positive() { return {make_matrix({{1, 0}, {0, 0}}), identity(2)}; }

struct NamedPencil {
  std::string name;
  Pencil pencil;
  double d;
};

/// The four k = 0 pencils with hand-derived stability radii.
inline std::vector<NamedPencil> hand_pencils() {
  return {{"diag(1,2), swap-S", swap_s(), std::sqrt(2.0)},
          {"diag(1/2,2), I", half_two(), 0.5},
          {"2x3 pencil", rect_2x3(), 1.0},
          {"(I, 0)", identity_zero(), std::numeric_limits<double>::infinity()}};
}

/// |a - b| / |b|, with matching infinities counted as equal.
inline double rel_err(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return (a > 0) == (b > 0) ? 0.0 : kInf;
  if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) return kInf;
  if (b == 0.0) return std::abs(a);
  return std::abs(a - b) / std::abs(b);
}

struct Planted {
  GeneratedPencil gen;
  Complex nearest;
};

/// Regular pencil with its nearest drop of modulus in [0.3, 3] and the others
/// at least twice as far out.
inline Planted planted_pencil(std::uint64_t seed, Index n) {
  Rng rng(mix_seed(seed, 0x5EED));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = 0.3 + 2.7 * unit(rng);
  const Complex nearest = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
  GenSpec spec;
  spec.kind = GenKind::Regular;
  spec.n = spec.p = n;
  spec.seed = seed;
  spec.drops.push_back(nearest);
  const int extra = static_cast<int>(unit(rng) * static_cast<double>(n));
  double modulus = 2.0 * r;
  for (int i = 0; i < extra; ++i) {
    modulus *= 1.1 + unit(rng);
    spec.drops.push_back(std::polar(modulus, 2.0 * std::numbers::pi * unit(rng)));
  }
  return {generate(spec), nearest};
}

/// Random pencil with k = 0: regular (n = p) or rectangular (n = p + 1).
inline Pencil random_k0_pencil(std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0xA11));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GenSpec spec;
  spec.seed = seed;
  const bool rectangular = seed % 3 == 2;
  spec.kind = rectangular ? GenKind::Rectangular : GenKind::Regular;
  spec.p = 3 + static_cast<Index>(seed % 3);
  spec.n = rectangular ? spec.p + 1 : spec.p;
  const Index slots = rectangular ? spec.p - 2 : spec.n;
  double modulus = 0.4 + unit(rng);
  for (Index i = 0; i < slots && (i == 0 || unit(rng) < 0.6); ++i) {
    if (rectangular && std::abs(modulus - 1.0) < 0.05) modulus += 0.1;
    spec.drops.push_back(std::polar(modulus, 2.0 * std::numbers::pi * unit(rng)));
    modulus *= 1.3 + unit(rng);
  }
  return generate(spec).pencil;
}

}  // namespace stabrad::testing
