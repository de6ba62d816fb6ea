#include "stabrad/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stabrad/errors.hpp"
#include "stabrad/random.hpp"

namespace stabrad {

const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::Regular:
      return "regular";
    case GenKind::Rectangular:
      return "rectangular";
    case GenKind::KPositive:
      return "k-positive";
  }
  return "unknown";
}

GenKind parse_gen_kind(const std::string& s) {
  if (s == "regular") return GenKind::Regular;
  if (s == "rectangular") return GenKind::Rectangular;
  if (s == "k-positive") return GenKind::KPositive;
  throw ContractViolation("unknown pencil kind '" + s +
                          "' (expected regular, rectangular or k-positive)");
}

CMatrix random_conditioned(std::uint64_t seed, std::uint64_t stream, Index n, double cond) {
  Rng rng(mix_seed(seed, stream));
  const CMatrix U = random_orthonormal(rng, n, n);
  const CMatrix V = random_orthonormal(rng, n, n);
  RVector s(n);
  for (Index i = 0; i < n; ++i) s[i] = n == 1 ? 1.0 : 1.0 + (cond - 1.0) * i / (n - 1.0);
  return U * s.cast<Complex>().asDiagonal() * V.adjoint();
}

namespace {

void validate_drops(const std::vector<Complex>& drops, const std::vector<double>& taken) {
  std::vector<double> moduli = taken;
  for (const Complex& z : drops) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ContractViolation("drop points must be finite");
    if (std::abs(z) == 0.0) throw ContractViolation("drop points must be nonzero");
    for (double m : moduli)
      if (std::abs(std::abs(z) - m) <= 1e-12 * std::max(1.0, m))
        throw ContractViolation("drop moduli must be distinct (and differ from the pattern block)");
    moduli.push_back(std::abs(z));
  }
}

struct Block {
  CMatrix T;
  CMatrix S;
};

Block regular_block(Rng& rng, Index m, const std::vector<Complex>& drops) {
  std::uniform_real_distribution<double> mod(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Block b{CMatrix::Zero(m, m), CMatrix::Zero(m, m)};
  for (Index i = 0; i < m; ++i) {
    if (i < static_cast<Index>(drops.size())) {
      const double s = mod(rng);
      b.S(i, i) = s;
      b.T(i, i) = drops[static_cast<std::size_t>(i)] * s;
    } else {
      b.T(i, i) = std::polar(mod(rng), phase(rng));
    }
  }
  return b;
}

Block direct_sum(const Block& a, const Block& b) {
  const Index r = a.T.rows() + b.T.rows();
  const Index c = a.T.cols() + b.T.cols();
  Block out{CMatrix::Zero(r, c), CMatrix::Zero(r, c)};
  out.T.topLeftCorner(a.T.rows(), a.T.cols()) = a.T;
  out.S.topLeftCorner(a.S.rows(), a.S.cols()) = a.S;
  out.T.bottomRightCorner(b.T.rows(), b.T.cols()) = b.T;
  out.S.bottomRightCorner(b.S.rows(), b.S.cols()) = b.S;
  return out;
}

}  // namespace

GeneratedPencil generate(const GenSpec& spec) {
  const std::vector<Complex>& drops = spec.drops;
  Rng rng(mix_seed(spec.seed, 0));
  Block core;
  std::vector<Complex> planted;
  Index k = 0;

  switch (spec.kind) {
    case GenKind::Regular: {
      if (spec.n != spec.p || spec.n < 1)
        throw ContractViolation("regular pencils need n = p >= 1");
      if (drops.empty())
        throw ContractViolation("regular pencils need at least one drop point (S would be 0)");
      if (static_cast<Index>(drops.size()) > spec.n)
        throw ContractViolation("more drop points than the dimension allows");
      validate_drops(drops, {});
      core = regular_block(rng, spec.n, drops);
      planted = drops;
      break;
    }
    case GenKind::Rectangular: {
      if (spec.p < 2 || spec.n != spec.p + 1)
        throw ContractViolation("rectangular pencils need p >= 2 and n = p + 1");
      if (static_cast<Index>(drops.size()) > spec.p - 2)
        throw ContractViolation("more drop points than the padding block allows");
      validate_drops(drops, {1.0});
      Block pattern{make_matrix({{1, 0, 0}, {0, 1, 0}}), make_matrix({{0, 0, 0}, {-1, 1, 0}})};
      core = direct_sum(pattern, regular_block(rng, spec.p - 2, drops));
      planted = drops;
      planted.push_back(1.0);
      break;
    }
    case GenKind::KPositive: {
      if (spec.n != spec.p || spec.n < 2)
        throw ContractViolation("k-positive pencils need n = p >= 2");
      if (static_cast<Index>(drops.size()) > spec.n - 2)
        throw ContractViolation("more drop points than the padding block allows");
      validate_drops(drops, {1.0});
      Block pattern{make_matrix({{1, 0}, {0, 0}}), identity(2)};
      core = direct_sum(pattern, regular_block(rng, spec.n - 2, drops));
      planted = drops;
      planted.push_back(0.0);
      planted.push_back(1.0);
      k = 1;
      break;
    }
  }

  const CMatrix A = random_conditioned(spec.seed, 1, spec.p);
  const CMatrix B = random_conditioned(spec.seed, 2, spec.n);
  std::sort(planted.begin(), planted.end(),
            [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  return {Pencil(A * core.T * B, A * core.S * B), spec, planted, k};
}

}  // namespace stabrad
