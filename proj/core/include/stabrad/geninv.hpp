#pragma once

// Generalized inverses of T, generalized resolvents of the pencil built from
// fixed complements, the Neumann family L (I - lambda S L)^{-1}, and the search
// for inner inverses with small spectral radius r(S L).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stabrad/matrixcore.hpp"
#include "stabrad/pencil.hpp"
#include "stabrad/subspace.hpp"

namespace stabrad {

/// How GenInverse::sr_SL was certified.
enum class RadiusCertificate {
  SpectralRadius,  ///< eigenvalues of S L
  NormSurrogate,   ///< min_k ||(S L)^k||^{1/k}, an upper bound on r(S L)
};

const char* to_string(RadiusCertificate c);

/// A candidate L (x_dim x y_dim) with its classification.
struct GenInverse {
  CMatrix L;
  double inner_residual = kInf;  ///< ||T L T - T||
  double outer_residual = kInf;  ///< ||L T L - L||
  bool is_inner = false;         ///< inner_residual <= 1e-8 (1 + ||T||)
  bool is_reflexive = false;     ///< is_inner and outer_residual <= 1e-8 (1 + ||L||)
  double sr_SL = kInf;           ///< spectral radius of S L (see certificate)
  RadiusCertificate certificate = RadiusCertificate::SpectralRadius;
};

/// Computes residuals, flags and a certified r(S L) for an arbitrary L.
GenInverse classify(const Pencil& P, CMatrix L);

/// min(spectral_radius(A), min_{k <= K} ||A^k||^{1/k}), reporting which side won.
/// Both sides estimate r(A) from above in exact arithmetic; the norm side is
/// exact for matrices that are nilpotent in floating point.
double certified_spectral_radius(const CMatrix& A, RadiusCertificate* kind = nullptr);

/// Z -> L(Z) = L0 + Z - L0 T Z T L0 with L0 = T^+. Onto the set of inner inverses.
class InnerParametrization {
 public:
  explicit InnerParametrization(const CMatrix& T, double eps_rel = kDefaultEpsRel);

  CMatrix operator()(const CMatrix& Z) const;
  const CMatrix& L0() const { return L0_; }
  Index rows() const { return L0_.rows(); }
  Index cols() const { return L0_.cols(); }

 private:
  CMatrix T_;
  CMatrix L0_;
};

GenInverse parametrize_inner(const Pencil& P, const CMatrix& Z, double eps_rel = kDefaultEpsRel);

/// L T L for an inner inverse L. Throws ContractViolation if L is not inner.
GenInverse reflexive_closure(const Pencil& P, const CMatrix& L);

/// Subspaces E of C^n and F of C^p complementary to N(T - lambda S) and
/// R(T - lambda S) on the disk |lambda| < valid_radius.
struct ComplementPair {
  Subspace E;
  Subspace F;
  double valid_radius = 0.0;
  int samples_checked = 0;
  /// Worst condition number of [B_E | B_N(lambda)] and [B_R(lambda) | B_F] over the samples.
  double worst_condition = 1.0;
  /// Attempt (0-based) that produced the accepted pair.
  int attempt = 0;
};

struct ComplementSearch {
  double radius = 0.0;
  int n_samples = 64;
  int n_attempts = 16;
  std::uint64_t seed = 0;
  double eps_rel = kDefaultEpsRel;
};

/// Draws random E and F of the right dimensions and keeps the first pair that is
/// complementary at lambda = 0 and at n_samples points on four concentric
/// circles. Each candidate is also checked on the whole closed disk: the points
/// where (T - lambda S) B_E loses column rank, or [(T - lambda S) | B_F] loses
/// row rank, are roots of compressed determinant polynomials, and a confirmed
/// root inside the disk rejects the pair.
///
/// Throws ConstancyViolated when rank(T - lambda S) differs between samples and
/// NoComplementFound when every attempt fails.
ComplementPair find_fixed_complements(const Pencil& P, const ComplementSearch& search);

/// Generalized resolvent of the pencil on a disk, determined by fixed complements.
class Resolvent {
 public:
  Resolvent(Pencil pencil, ComplementPair complements);

  const Pencil& pencil() const { return pencil_; }
  const ComplementPair& complements() const { return complements_; }

  /// G(lambda): the generalized inverse of T - lambda S with range E and null space F.
  /// Throws ContractViolation outside the validated disk.
  CMatrix operator()(Complex lambda) const;

  /// P(lambda), the projector onto R(T - lambda S) along F.
  CMatrix range_projector(Complex lambda) const;
  /// Q(lambda), the projector onto E along N(T - lambda S).
  CMatrix domain_projector(Complex lambda) const;

 private:
  void require_inside(Complex lambda) const;

  Pencil pencil_;
  ComplementPair complements_;
  CMatrix E_basis_;   ///< B_E
  CMatrix F_annihilator_;  ///< rows span (F-perp)*, so its kernel is F
};

CMatrix resolvent_eval(const Resolvent& R, Complex lambda);

/// Resolvent built directly from the oblique projectors P(lambda), Q(lambda) and a
/// least-squares solve: G(lambda) u = Q(lambda) v where (T - lambda S) v = P(lambda) u.
CMatrix resolvent_eval_projective(const Resolvent& R, Complex lambda);

struct ResolventResiduals {
  double inner = 0.0;     ///< ||A G A - A||, A = T - lambda S
  double outer = 0.0;     ///< ||G A G - G||
  double identity = 0.0;  ///< ||G(l) - G(m) - (l - m) G(l) S G(m)||
};

ResolventResiduals verify_resolvent(const Resolvent& R, Complex lambda, Complex mu);

/// Taylor coefficient G_n of the resolvent at 0, by the trapezoidal rule on the
/// circle |lambda| = radius with `points` nodes.
CMatrix resolvent_taylor_coefficient(const Resolvent& R, int n, double radius, int points = 64);

/// min(1 / ||S L||, 1 / ||L S||); +inf when both products vanish.
double neumann_alpha(const Pencil& P, const CMatrix& L);

/// F(lambda) = L (I - lambda S L)^{-1} for an inner L and |lambda| < neumann_alpha.
CMatrix neumann_family(const Pencil& P, const CMatrix& L, Complex lambda);

/// ||(T - lambda S) F(lambda) (T - lambda S) - (T - lambda S)||.
double neumann_inner_residual(const Pencil& P, const CMatrix& L, Complex lambda);

struct OptBudget {
  int starts = 24;
  int evals = 2000;  ///< per start, split evenly across the four stages
  std::uint64_t seed = 0;
  int threads = 1;
  double eps_rel = kDefaultEpsRel;
};

/// Called with every L(Z) the optimizer evaluates. Calls are serialized.
using InnerObserver = std::function<void(const CMatrix& L)>;

struct StartResult {
  std::string kind;  ///< "pseudo-inverse", "resolvent", "random"
  GenInverse result;
};

struct SrOptimum {
  GenInverse best;
  GenInverse best_reflexive;  ///< reflexive closure of best
  int best_start = 0;
  std::vector<StartResult> starts;
  /// Radius at which the resolvent start was built (0 if none was found).
  double resolvent_radius = 0.0;
  /// Set when the zero-radius refinement produced the returned witness.
  bool nilpotent_refined = false;
};

/// Multi-start Nelder-Mead over Z minimizing r(S L(Z)). Each start runs the
/// surrogates ||(S L)^k||^{1/k} for k = 4, 8, 16 and then polishes on r(S L).
/// `radius_hint` (typically the oracle stability radius, +inf if unknown) sets
/// the disks on which the resolvent start is sought.
SrOptimum minimize_sr(const Pencil& P, const OptBudget& budget, double radius_hint = kInf,
                      const InnerObserver& observer = {});

}  // namespace stabrad
