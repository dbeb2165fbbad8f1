#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "extenso/error.hpp"
#include "extenso/extensivity.hpp"
#include "oracles.hpp"

using namespace extenso;

TEST(Residual, MatchingPowerVanishes) {
  struct Case {
    Density d;
    double q;
  };
  for (const auto& c : {Case{bg_density(), 1.0}, Case{tsallis_density(0.5), 0.5}, Case{tsallis_density(2), 2.0}}) {
    const EntropyFunctional S(c.d);
    const auto f = power_coefficient(c.q);
    for (std::uint64_t i = 0; i < 200; ++i) {
      auto rng = instance_rng(1, i);
      const auto p = random_joint(1 + i % 8, 1 + (i / 8) % 8, rng);
      ASSERT_NEAR(extensivity_residual(S, p, f), 0.0, 1e-12) << c.d.label();
    }
  }
}

TEST(Residual, TsallisTwoProductWithLinearCoefficient) {
  const SimplexVector half({0.5, 0.5});
  const auto p = product_joint(half, half);
  EXPECT_NEAR(extensivity_residual(EntropyFunctional(tsallis_density(2)), p, power_coefficient(1)), -0.25, 1e-15);
}

TEST(Residual, ZeroEntriesInsideColumns) {
  const auto p = iff_witness_matrix(0.3);
  EXPECT_NEAR(extensivity_residual(EntropyFunctional(bg_density()), p, power_coefficient(1)), 0.0, 1e-15);
}

TEST(Sandwich, TsallisEqualityCollapse) {
  for (double q : {0.5, 2.0}) {
    const EntropyFunctional S(tsallis_density(q));
    for (std::uint64_t i = 0; i < 30; ++i) {
      const auto r = sandwich_check(S, random_joint(4, 4, i));
      EXPECT_EQ(r.verdict, Verdict::pass);
      EXPECT_LE(r.upper - r.lower, r.tolerance);
      EXPECT_NEAR(r.lower, r.diff, r.tolerance);
    }
  }
}

TEST(Sandwich, BgCollapses) {
  const EntropyFunctional S(bg_density());
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto r = sandwich_check(S, random_joint(3, 5, i));
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_LE(r.upper - r.lower, r.tolerance);
  }
}

TEST(Sandwich, LogSineWitnessPasses) {
  const auto r = sandwich_check(EntropyFunctional(log_sine_density()), iff_witness_matrix(0.5));
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_GE(r.slack_lower, -r.tolerance);
  EXPECT_GE(r.slack_upper, -r.tolerance);
}

TEST(Sandwich, OscillatingIsDivergent) {
  const auto r = sandwich_check(EntropyFunctional(oscillating_density()), iff_witness_matrix(0.5));
  EXPECT_EQ(r.verdict, Verdict::divergent);
}

TEST(Sandwich, RejectsNonConcave) {
  const Density convex("convex", [](double r) { return r * r - r; }, [](double r) { return 2 * r - 1; },
                       [](double) { return 2.0; }, DensityFlags{.s0_zero = true, .s1_zero = true});
  EXPECT_THROW(sandwich_check(EntropyFunctional(convex), iff_witness_matrix(0.5)), Error);
}

TEST(IffLhs, LogSineValues) {
  const EntropyFunctional S(log_sine_density());
  EXPECT_NEAR(iff_lhs(S, iff_witness_matrix(0.02)), oracle::kIffAt0p02, 1e-7);
  EXPECT_NEAR(iff_lhs(S, iff_witness_matrix(0.01)), oracle::kIffAt0p01, 1e-7);
  EXPECT_NEAR(iff_lhs(S, iff_witness_matrix(0.005)), oracle::kIffAt0p005, 1e-7);
  EXPECT_NEAR(iff_lhs(S, iff_witness_matrix(0.5)), oracle::kIffAt0p5, 1e-7);
  for (double x : {0.02, 0.01, 0.005}) {
    const double v = iff_lhs(S, iff_witness_matrix(x));
    EXPECT_LT(v, 0.0);
    EXPECT_NEAR(v, oracle::kIffLimit, 0.05);
  }
}

TEST(IffLhs, TsallisNonNegative) {
  const EntropyFunctional S(tsallis_density(0.5));
  for (std::uint64_t i = 0; i < 20; ++i) EXPECT_GE(iff_lhs(S, random_joint(3, 3, i)), -1e-9);
}

TEST(RecoverF, PowerLaws) {
  for (double q : {0.5, 2.0, 3.0}) {
    const auto d = tsallis_density(q);
    const auto pr = recover_f(d);
    EXPECT_EQ(pr.verdict, PowerVerdict::power);
    EXPECT_NEAR(pr.q_est, q, 1e-6);
    ASSERT_TRUE(pr.reconstruction);
    EXPECT_FALSE(pr.reconstruction->log_branch);
    EXPECT_LT(pr.reconstruction->k, 0.0);
    EXPECT_LE(pr.reconstruction->max_error, 1e-8);
    EXPECT_NEAR(pr.reconstruction->k, d.s2(1.0) / q, 1e-14);
  }
}

TEST(RecoverF, BgUsesLogBranch) {
  const auto d = bg_density();
  const auto pr = recover_f(d);
  EXPECT_EQ(pr.verdict, PowerVerdict::power);
  EXPECT_NEAR(pr.q_est, 1.0, 1e-6);
  ASSERT_TRUE(pr.reconstruction);
  EXPECT_TRUE(pr.reconstruction->log_branch);
  EXPECT_LE(pr.reconstruction->max_error, 1e-8);
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR((*pr.reconstruction)(r, pr.q_est), d.s(r), 1e-8);
}

TEST(RecoverF, NotPowerLaws) {
  const auto ls = recover_f(log_sine_density());
  EXPECT_EQ(ls.verdict, PowerVerdict::not_power);
  EXPECT_GT(ls.x_spread, 1e-2);
  EXPECT_FALSE(ls.reconstruction);
  EXPECT_NE(recover_f(oscillating_density()).verdict, PowerVerdict::power);
}

TEST(TwiceEquation, PowerCoefficient) {
  for (double q : {0.5, 2.0}) {
    const auto d = tsallis_density(q);
    for (double r : {0.2, 0.7})
      for (double xi : {0.6, 1.0}) EXPECT_NEAR(check_twice_equation(d, power_coefficient(q), r, xi, 0.25), 0.0, 1e-8);
  }
}

TEST(TwiceEquation, MidpointReducesToRatio) {
  const auto d = log_sine_density();
  const double r = 0.4, xi = 0.8;
  const double fr = r * r * d.s2(r * xi / 2) / d.s2(xi / 2);
  EXPECT_NEAR(check_twice_equation(d, [fr](double) { return fr; }, r, xi, xi / 2), 0.0, 1e-13);
}

TEST(TwiceEquation, LogSineWithSquareIsNonZero) {
  const double res = check_twice_equation(log_sine_density(), power_coefficient(2), 0.5, 1.0, 0.3);
  EXPECT_GT(std::abs(res), 1e-3);
}

TEST(TwiceEquation, RangeChecks) {
  const auto d = bg_density();
  const auto f = power_coefficient(1);
  EXPECT_THROW(check_twice_equation(d, f, 0.5, 0.5, 0.6), Error);
  EXPECT_THROW(check_twice_equation(d, f, 1.0, 0.5, 0.2), Error);
  EXPECT_THROW(check_twice_equation(d, f, 0.5, 1.2, 0.2), Error);
}

TEST(TwiceEquation, FiniteDifferenceCrossCheck) {
  struct Case {
    Density d;
    Coefficient f;
  };
  for (const auto& c : {Case{tsallis_density(2), power_coefficient(2)}, Case{log_sine_density(), power_coefficient(2)},
                        Case{bg_density(), power_coefficient(1.5)}}) {
    const EntropyFunctional S(c.d);
    for (double r : {0.3, 0.6}) {
      const double direct = check_twice_equation(c.d, c.f, r, 0.9, 0.4);
      const double fd = twice_residual_by_differences(S, c.f, r, 0.9, 0.4);
      EXPECT_NEAR(fd, direct, 1e-4) << c.d.label() << " r=" << r;
    }
  }
}

TEST(TwiceMatrix, Layout) {
  const auto p = twice_matrix(0.5, 0.8, 0.3);
  ASSERT_EQ(p.rows(), 3u);
  ASSERT_EQ(p.cols(), 2u);
  EXPECT_NEAR(p(0, 0), 0.15, 1e-15);
  EXPECT_NEAR(p(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(p(2, 0), 0.10, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p(i, 1), 0.5 / 3, 1e-15);
}

TEST(Axioms, CatalogPasses) {
  const std::size_t sizes[] = {2, 3, 4, 5, 6, 7, 8};
  for (const auto& d : {bg_density(), tsallis_density(2), log_sine_density()}) {
    const auto rep = axiom_suite(EntropyFunctional(d), sizes, 17, 40);
    EXPECT_TRUE(rep.passed()) << d.label();
    EXPECT_EQ(rep.instances, 7u * 40u);
    EXPECT_GE(rep.worst_maximality_slack, -1e-12);
  }
}

TEST(Axioms, MaximalityForBg) {
  const EntropyFunctional S(bg_density());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_LE(S(random_simplex(5, rng)), std::log(5.0) + 1e-12);
}

TEST(Axioms, ConvexDensityFailsMaximality) {
  const Density convex("convex", [](double r) { return r * r; }, [](double r) { return 2 * r; },
                       [](double) { return 2.0; }, DensityFlags{.s0_zero = true, .concave = true});
  const std::size_t sizes[] = {3};
  EXPECT_FALSE(axiom_suite(EntropyFunctional(convex), sizes, 1, 20).passed());
}

TEST(Monotonicity, Examples) {
  EXPECT_TRUE(monotonicity_check(EntropyFunctional(log_sine_density()), iff_witness_matrix(0.3)));
  const EntropyFunctional bg(bg_density()), ts(tsallis_density(0.5));
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = random_joint(4, 3, i);
    EXPECT_TRUE(monotonicity_check(bg, p));
    EXPECT_TRUE(monotonicity_check(ts, p));
  }
}
