#include <gtest/gtest.h>

#include <atomic>

#include "stabrad/errors.hpp"
#include "stabrad/geninv.hpp"
#include "stabrad/radius.hpp"
#include "support.hpp"

using namespace stabrad;
using namespace stabrad::testing;

namespace {

Resolvent resolvent_for(const Pencil& P, double radius, std::uint64_t seed = 0) {
  ComplementSearch search;
  search.radius = radius;
  search.seed = seed;
  return Resolvent(P, find_fixed_complements(P, search));
}

std::vector<Complex> points_in_disk(std::uint64_t seed, double radius, int count) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i)
    out.push_back(std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)));
  return out;
}

}  // namespace

TEST(Classify, PseudoInverseIsReflexive) {
  const Pencil P = rect_2x3();
  const GenInverse g = classify(P, pseudo_inverse(P.T()));
  EXPECT_TRUE(g.is_inner);
  EXPECT_TRUE(g.is_reflexive);
  EXPECT_LE(g.inner_residual, 1e-14);
}

TEST(Classify, ZeroIsNotInner) {
  const Pencil P = swap_s();
  const GenInverse g = classify(P, CMatrix::Zero(2, 2));
  EXPECT_FALSE(g.is_inner);
  EXPECT_THROW(classify(P, CMatrix::Zero(3, 2)), ContractViolation);
}

TEST(CertifiedRadius, NilpotentAndDiagonal) {
  RadiusCertificate kind;
  EXPECT_NEAR(certified_spectral_radius(make_matrix({{0, 1}, {0, 0}}), &kind), 0.0, 1e-12);
  EXPECT_NEAR(certified_spectral_radius(make_matrix({{2, 0}, {0, 0.5}})), 2.0, 1e-12);
}

TEST(ParametrizeInner, ZeroParameterGivesPseudoInverse) {
  const Pencil P = k_positive();
  const GenInverse g = parametrize_inner(P, CMatrix::Zero(2, 2));
  EXPECT_LE(operator_norm(g.L - make_matrix({{1, 0}, {0, 0}})), 1e-15);
  EXPECT_TRUE(g.is_reflexive);
}

TEST(ParametrizeInner, EveryParameterGivesAnInnerInverse) {
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    for (int t = 0; t < 4; ++t) {
      const CMatrix Z = random_gaussian(rng, P.x_dim(), P.y_dim());
      const GenInverse g = parametrize_inner(P, Z);
      EXPECT_TRUE(g.is_inner) << "seed " << seed << " residual " << g.inner_residual;
    }
  }
}

TEST(ParametrizeInner, SingularTExample) {
  // T = diag(1, 0): the (2, 2) entry of Z survives and L stays inner.
  const Pencil P = k_positive();
  const GenInverse g = parametrize_inner(P, make_matrix({{5, 1}, {1, 3}}));
  EXPECT_TRUE(g.is_inner);
  EXPECT_FALSE(g.is_reflexive);
  EXPECT_NEAR(std::abs(g.L(1, 1) - 3.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g.L(0, 0) - 1.0), 0.0, 1e-14);
}

TEST(ReflexiveClosure, ProducesReflexiveInverse) {
  const Pencil P = k_positive();
  const GenInverse g = parametrize_inner(P, make_matrix({{5, 1}, {1, 3}}));
  const GenInverse r = reflexive_closure(P, g.L);
  EXPECT_TRUE(r.is_reflexive);
  // L T L for L = [[1, 1], [1, 3]] and T = diag(1, 0).
  EXPECT_LE(operator_norm(r.L - make_matrix({{1, 1}, {1, 1}})), 1e-14);
  EXPECT_THROW(reflexive_closure(P, CMatrix::Zero(2, 2)), ContractViolation);
}

TEST(Complements, InvertibleCaseIsTrivial) {
  ComplementSearch search;
  search.radius = 0.9 * std::sqrt(2.0);
  const ComplementPair c = find_fixed_complements(swap_s(), search);
  EXPECT_TRUE(c.E.is_full());
  EXPECT_TRUE(c.F.is_zero());
  EXPECT_DOUBLE_EQ(c.valid_radius, search.radius);
}

TEST(Complements, RectangularExample) {
  ComplementSearch search;
  search.radius = 0.9;
  const ComplementPair c = find_fixed_complements(rect_2x3(), search);
  EXPECT_EQ(c.E.dim(), 2);
  EXPECT_EQ(c.E.ambient_dim, 3);
  EXPECT_TRUE(c.F.is_zero());
}

TEST(Complements, DropAtSampleRaisesConstancyViolated) {
  const Pencil P(make_matrix({{0, 0}, {0, 1}}), identity(2));
  ComplementSearch search;
  search.radius = 0.5;
  EXPECT_THROW(find_fixed_complements(P, search), ConstancyViolated);
}

TEST(Complements, DropInsideDiskIsRejected) {
  ComplementSearch search;
  search.radius = 1.0;
  search.n_attempts = 3;
  try {
    find_fixed_complements(half_two(), search);
    FAIL() << "expected NoComplementFound";
  } catch (const NoComplementFound& e) {
    EXPECT_NEAR(std::abs(e.worst_lambda() - Complex(0.5)), 0.0, 1e-6);
  }
}

TEST(Complements, RejectsBadRadius) {
  ComplementSearch search;
  EXPECT_THROW(find_fixed_complements(swap_s(), search), ContractViolation);
}

TEST(Resolvent, InvertibleCaseIsTheInverse) {
  const Pencil P = swap_s();
  const Resolvent R = resolvent_for(P, 1.2);
  for (const Complex& z : points_in_disk(1, 1.2, 10))
    EXPECT_LE(operator_norm(R(z) - P.at(z).inverse()), 1e-10);
  EXPECT_THROW(R(Complex(1.3)), ContractViolation);
}

TEST(Resolvent, ResidualsOnRandomPencils) {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    const double d = d_oracle(P).d;
    const double radius = 0.9 * d;
    const Resolvent R = resolvent_for(P, radius, seed);
    const auto pts = points_in_disk(seed + 100, radius, 16);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const ResolventResiduals r = verify_resolvent(R, pts[i], pts[i + 1]);
      EXPECT_LE(r.inner, 1e-7) << "seed " << seed;
      EXPECT_LE(r.outer, 1e-7) << "seed " << seed;
      EXPECT_LE(r.identity, 1e-7) << "seed " << seed;
    }
    // lambda = mu makes the identity trivially zero.
    EXPECT_EQ(verify_resolvent(R, pts[0], pts[0]).identity, 0.0);
  }
}

TEST(Resolvent, ValuesCommuteThroughS) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    const Resolvent R = resolvent_for(P, 0.8 * d_oracle(P).d, seed);
    const auto pts = points_in_disk(seed + 7, 0.8 * d_oracle(P).d, 2);
    const CMatrix a = R(pts[0]) * P.S() * R(pts[1]);
    const CMatrix b = R(pts[1]) * P.S() * R(pts[0]);
    EXPECT_LE(operator_norm(a - b), 1e-8 * (1 + operator_norm(a))) << "seed " << seed;
  }
}

TEST(Resolvent, RangeAndKernelStayFixed) {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    const double radius = 0.9 * d_oracle(P).d;
    const Resolvent R = resolvent_for(P, radius, seed);
    const CMatrix outside_E = identity(P.x_dim()) - R.complements().E.projector();
    for (const Complex& z : points_in_disk(seed + 3, radius, 5)) {
      const CMatrix G = R(z);
      const double g = 1 + operator_norm(G);
      EXPECT_LE(operator_norm(outside_E * G), 1e-9 * g);
      if (!R.complements().F.is_zero())
        EXPECT_LE(operator_norm(G * R.complements().F.basis), 1e-9 * g);
      EXPECT_EQ(range(G).dim(), R.complements().E.dim());
    }
  }
}

TEST(Resolvent, ClosedFormMatchesProjectiveRoute) {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    const double radius = 0.9 * d_oracle(P).d;
    const Resolvent R = resolvent_for(P, radius, seed);
    for (const Complex& z : points_in_disk(seed + 5, radius, 4)) {
      const CMatrix a = resolvent_eval(R, z);
      const CMatrix b = resolvent_eval_projective(R, z);
      EXPECT_LE(operator_norm(a - b), 1e-7 * (1 + operator_norm(a))) << "seed " << seed;
    }
  }
}

TEST(Resolvent, TaylorCoefficientsOfTheInverse) {
  // (T - lambda S)^-1 = sum lambda^n (T^-1 S)^n T^-1.
  const Pencil P = swap_s();
  const Resolvent R = resolvent_for(P, 1.2);
  const CMatrix Tinv = P.T().inverse();
  CMatrix expected = Tinv;
  for (int n = 0; n < 4; ++n) {
    EXPECT_LE(operator_norm(resolvent_taylor_coefficient(R, n, 1.0) - expected), 1e-8);
    expected = Tinv * P.S() * expected;
  }
}

TEST(Neumann, AlphaExample) {
  const Pencil P = half_two();
  EXPECT_DOUBLE_EQ(neumann_alpha(P, P.T().inverse()), 0.5);
  EXPECT_TRUE(std::isinf(neumann_alpha(identity_zero(), identity(2))));
}

TEST(Neumann, InnerForKZero) {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Pencil P = random_k0_pencil(seed);
    const CMatrix L = pseudo_inverse(P.T());
    const double alpha = neumann_alpha(P, L);
    for (const Complex& z : points_in_disk(seed, 0.9 * std::min(alpha, 1e6), 6))
      EXPECT_LE(neumann_inner_residual(P, L, z), 1e-7) << "seed " << seed;
  }
}

TEST(Neumann, KPositiveResidualIsModulus) {
  const Pencil P = k_positive();
  const CMatrix L = pseudo_inverse(P.T());
  EXPECT_DOUBLE_EQ(neumann_alpha(P, L), 1.0);
  for (double r : {0.1, 0.3, 0.6, 0.9}) {
    const Complex z = std::polar(r, 0.7);
    EXPECT_NEAR(neumann_inner_residual(P, L, z), r, 1e-12);
  }
  EXPECT_THROW(neumann_family(P, L, Complex(1.0)), ContractViolation);
}

TEST(MinimizeSr, HandExamples) {
  OptBudget budget;
  budget.starts = 8;
  budget.evals = 400;
  for (const NamedPencil& h : hand_pencils()) {
    const SrOptimum opt = minimize_sr(h.pencil, budget, h.d);
    EXPECT_TRUE(opt.best.is_inner) << h.name;
    const double d = inverse_radius(opt.best, h.pencil);
    EXPECT_LE(rel_err(d, h.d), 1e-6) << h.name << ": " << d;
  }
}

TEST(MinimizeSr, KPositiveReachesNilpotentProduct) {
  OptBudget budget;
  budget.starts = 8;
  budget.evals = 400;
  const SrOptimum opt = minimize_sr(k_positive(), budget);
  EXPECT_TRUE(opt.best.is_inner);
  EXPECT_LE(opt.best.sr_SL, 1e-8);
}

TEST(MinimizeSr, EveryObservedInnerInverseRespectsTheOracle) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Planted pl = planted_pencil(seed, 3);
    const Pencil& P = pl.gen.pencil;
    const double d = std::abs(pl.nearest);
    std::atomic<int> seen{0};
    std::atomic<int> violations{0};
    OptBudget budget;
    budget.starts = 6;
    budget.evals = 300;
    budget.seed = seed;
    minimize_sr(P, budget, d, [&](const CMatrix& L) {
      const GenInverse g = classify(P, L);
      if (!g.is_inner) return;
      ++seen;
      const double r = spectral_radius(P.S() * L);
      if (r > 0 && 1.0 / r > d * (1 + 1e-6)) ++violations;
    });
    EXPECT_GT(seen.load(), 0);
    EXPECT_EQ(violations.load(), 0) << "seed " << seed;
  }
}

TEST(MinimizeSr, RejectsEmptyBudget) {
  OptBudget budget;
  budget.starts = 0;
  EXPECT_THROW(minimize_sr(swap_s(), budget), ContractViolation);
}
