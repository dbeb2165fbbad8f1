#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "extenso/bounds.hpp"
#include "extenso/error.hpp"

using namespace extenso;

TEST(CoefficientBounds, TsallisCollapse) {
  for (double q : {0.5, 2.0}) {
    const auto d = tsallis_density(q);
    for (int k = 1; k <= 9; ++k) {
      const double r = k / 10.0;
      const auto b = coefficient_bounds(d, r);
      EXPECT_NEAR(b.lower, std::pow(r, q), 1e-6);
      EXPECT_NEAR(b.upper, std::pow(r, q), 1e-6);
      EXPECT_LE(std::abs(b.upper - b.lower), b.combined_error() + 1e-12);
      EXPECT_FALSE(b.divergent);
    }
  }
}

TEST(CoefficientBounds, BgIsLinear) {
  const auto b = coefficient_bounds(bg_density(), 0.3);
  EXPECT_NEAR(b.lower, 0.3, 1e-12);
  EXPECT_NEAR(b.upper, 0.3, 1e-12);
}

TEST(CoefficientBounds, LogSineHalf) {
  const auto b = coefficient_bounds(log_sine_density(), 0.5);
  EXPECT_NEAR(b.lower, 0.5, 1e-4);
  EXPECT_NEAR(b.upper, (1 + std::numbers::sqrt2) / 4, 1e-4);
  EXPECT_FALSE(b.divergent);
}

TEST(CoefficientBounds, OscillatingHalfDiverges) {
  const auto b = coefficient_bounds(oscillating_density(), 0.5);
  EXPECT_TRUE(b.divergent);
  EXPECT_TRUE(std::isinf(b.upper));
}

TEST(CoefficientBounds, OscillatingOddReciprocalStaysFinite) {
  // cos(5u) is a multiple of cos(u), so at r = 1/5 the ratio is bounded by 5 r^3.
  const auto b = coefficient_bounds(oscillating_density(), 0.2);
  EXPECT_FALSE(b.divergent);
  EXPECT_LE(b.upper, 5 * 0.008 + 1e-9);
}

TEST(CoefficientBounds, UnitRatioAtOne) {
  for (const auto& d : {bg_density(), tsallis_density(3), oscillating_density(), log_sine_density()}) {
    const auto b = coefficient_bounds(d, 1.0);
    EXPECT_EQ(b.lower, 1.0);
    EXPECT_EQ(b.upper, 1.0);
  }
}

TEST(CoefficientBounds, OrderedAndNonNegative) {
  for (const auto& d : {bg_density(), tsallis_density(0.5), tsallis_density(3), log_sine_density()}) {
    for (double r : {0.05, 0.25, 0.6, 0.95}) {
      const auto b = coefficient_bounds(d, r);
      EXPECT_GE(b.lower, 0.0);
      EXPECT_LE(b.lower, b.upper + b.combined_error()) << d.label() << " r=" << r;
    }
  }
}

TEST(CoefficientBounds, RejectsBadR) {
  EXPECT_THROW(coefficient_bounds(bg_density(), 0.0), Error);
  EXPECT_THROW(coefficient_bounds(bg_density(), 1.5), Error);
}

TEST(CoefficientBounds, LogSineHalfRatioClosedForm) {
  const auto d = log_sine_density();
  for (int k = 1; k <= 512; ++k) {
    const double u = k / 512.0;
    const double c = std::cos(std::numbers::pi * u / 4);
    const double closed = (c + 1) / c;
    EXPECT_GE(closed, 2.0);
    EXPECT_LE(closed, 1 + std::numbers::sqrt2 + 1e-15);
    EXPECT_NEAR(d.s2(u / 2) / d.s2(u), closed, 1e-12 * closed);
  }
}

TEST(BoundsCsv, Columns) {
  const CoefficientBounds rows[] = {coefficient_bounds(bg_density(), 0.5)};
  const auto csv = bounds_csv(rows);
  EXPECT_EQ(csv.rfind("r,lower,upper,arg_inf,arg_sup,divergent\n", 0), 0u);
}

TEST(Phi, CatalogForms) {
  const auto ls = phi_from_density(log_sine_density());
  EXPECT_NEAR(ls(1.0), 4 / std::numbers::pi, 1e-14);
  for (double r : {0.1, 0.5, 0.9})
    EXPECT_NEAR(ls(r), 4 / std::numbers::pi * std::tan(std::numbers::pi * r / 4), 1e-13);
  // Linear continuation with slope phi'(1) = 2.
  EXPECT_NEAR(ls(3.0), 2 * 2.0 + 4 / std::numbers::pi, 1e-6);

  const auto bg = phi_from_density(bg_density());
  for (double r : {0.1, 0.5, 1.0, 7.0}) EXPECT_NEAR(bg(r), r, 1e-9);

  const double q = 0.5;
  const auto ts = phi_from_density(tsallis_density(q));
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR(ts(r), std::pow(r, 2 - q) / q, 1e-13);
}

TEST(Phi, Preconditions) {
  // phi = r^{2-q}/q decreases when q > 2.
  EXPECT_THROW(phi_from_density(tsallis_density(3)), Error);
  const Density convex("convex", [](double r) { return r * r; }, [](double r) { return 2 * r; },
                       [](double) { return 2.0; }, DensityFlags{.s0_zero = true});
  EXPECT_THROW(phi_from_density(convex), Error);
}

TEST(ThetaPhi, CatalogValues) {
  EXPECT_NEAR(theta_phi(phi_from_density(log_sine_density())), std::numbers::pi / 2, 1e-3);
  EXPECT_NEAR(theta_phi(phi_from_density(bg_density())), 1.0, 1e-6);
}

TEST(ThetaPhi, TsallisUnitBranch) {
  // r phi'(r)/phi(r) = 2 - q on (0, 1].
  for (double q : {0.5, 1.5}) {
    ThetaConfig cfg;
    cfg.r_hi = 1.0;
    EXPECT_NEAR(theta_phi(phi_from_density(tsallis_density(q)), cfg), 2 - q, 1e-3);
  }
}

TEST(ThetaPhi, OverflowGivesInfinity) {
  const PhiFunction steep([](double r) { return std::exp(1e3 * r); }, 1e300, "steep");
  EXPECT_TRUE(std::isinf(theta_phi(steep)));
}

TEST(CoefficientBounds, TinyMarginalIsNotDivergence) {
  // The raw ratio r^(q-2) is about 1e15 here, but the bound r^q is tiny.
  const auto b = coefficient_bounds(tsallis_density(0.2), 1e-8);
  EXPECT_FALSE(b.divergent);
  EXPECT_NEAR(b.upper, std::pow(1e-8, 0.2), 1e-9);
}
