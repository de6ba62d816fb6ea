#pragma once

// Random pencils with planted ground truth.

#include <cstdint>
#include <string>
#include <vector>

#include "stabrad/matrixcore.hpp"
#include "stabrad/pencil.hpp"

namespace stabrad {

enum class GenKind { Regular, Rectangular, KPositive };

const char* to_string(GenKind kind);
/// Parses "regular", "rectangular" or "k-positive"; ContractViolation otherwise.
GenKind parse_gen_kind(const std::string& s);

struct GenSpec {
  GenKind kind = GenKind::Regular;
  Index n = 4;  ///< x_dim
  Index p = 4;  ///< y_dim
  std::vector<Complex> drops;
  std::uint64_t seed = 0;
};

struct GeneratedPencil {
  Pencil pencil;
  GenSpec spec;
  std::vector<Complex> planted_drops;  ///< every lambda where the rank falls, ascending modulus
  Index planted_k = 0;
};

/// regular: n = p, T = A diag(t) B and S = A diag(s) B with A, B of condition 10;
///   slot i < |drops| has t_i = lambda_i s_i, the other slots have s_i = 0.
/// rectangular: n = p + 1, a 2 x 3 block losing rank at lambda = 1 next to a
///   regular (p - 2)-block carrying the drops.
/// kpositive: n = p, the block T = [[1,0],[0,0]], S = I next to a regular
///   (n - 2)-block carrying the drops; k = 1.
/// Throws ContractViolation on inconsistent dimensions or a bad drop list.
GeneratedPencil generate(const GenSpec& spec);

/// Random n x n matrix with singular values spread evenly over [1, cond].
CMatrix random_conditioned(std::uint64_t seed, std::uint64_t stream, Index n, double cond = 10.0);

}  // namespace stabrad
