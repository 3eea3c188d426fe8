#include <gtest/gtest.h>

#include <cmath>

#include "fga/error.hpp"
#include "fga/smoothfn.hpp"

using namespace fga;

TEST(Bump, SupportAndPeak) {
  EXPECT_EQ(bump(0.0), 0.0);
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(-0.3), 0.0);
  EXPECT_NEAR(bump(0.5), std::exp(-4.0), 1e-15);
  EXPECT_NEAR(bump_cdf(0.5), 0.5, 1e-12);
  EXPECT_EQ(bump_cdf(2.0), 1.0);
}

TEST(Cut, PlateausAndMonotone) {
  const SmoothFnParams p{1.0, 2.0, 1.0};
  EXPECT_EQ(cut(0.5, p), 1.0);
  EXPECT_EQ(cut(3.5, p), 0.0);
  double prev = 1.0;
  for (double x = 1.0; x <= 3.0; x += 0.05) {
    EXPECT_LE(cut(x, p), prev + 1e-15);
    prev = cut(x, p);
  }
}

TEST(Sat, DerivativeIsCut) {
  const SmoothFnParams p{2.0, 1.0, 1.0};
  for (double x : {0.5, 2.2, 2.7, 4.0}) EXPECT_NEAR(sat_derivative(x, p, 1), cut(x, p), 1e-12);
  EXPECT_NEAR(sat(1.5, p), 1.5, 1e-12);
  // saturates at alpha + beta/2 for a symmetric band
  EXPECT_NEAR(sat(10.0, p), 2.5, 1e-9);
}

TEST(Bar, ZeroInsideLinearOutside) {
  EXPECT_EQ(bar(-1.0, 0.1), 0.0);
  EXPECT_EQ(bar(0.0, 0.1), 0.0);
  EXPECT_NEAR(bar_derivative(2.0, 0.1, 1), 1.0, 1e-12);
  EXPECT_NEAR(bar(2.0, 0.1) - bar(1.0, 0.1), 1.0, 1e-12);
}

TEST(BumpDerivPoly, RecursionCoefficients) {
  EXPECT_EQ(BumpDerivPoly::of_order(0).coefficients(), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(BumpDerivPoly::of_order(1).coefficients(), (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_EQ(BumpDerivPoly::of_order(2).coefficients(), (std::vector<std::int64_t>{0, 0, 0, -2, 1}));
  EXPECT_EQ(BumpDerivPoly::of_order(5).degree(), 10);
}

TEST(BumpDerivative, MatchesFiniteDifferences) {
  const std::vector<double> xs = linspace(0.2, 0.8, 7);
  const auto exact = tabulate_derivatives([](double x, int m) { return bump_derivative(x, m); }, xs, 3);
  const auto fd = finite_difference_table(bump, xs, 3, 1e-3);
  for (int l = 0; l < 3; ++l)
    for (std::size_t i = 0; i < xs.size(); ++i)
      EXPECT_NEAR(exact.values[l][i], fd.values[l][i], 1e-6 * (1.0 + std::abs(exact.values[l][i])));
}

TEST(BumpDerivative, BoundHoldsOnSamples) {
  const auto xs = linspace(0.001, 0.999, 999);
  for (int m = 1; m <= 6; ++m) {
    double worst = 0.0;
    for (double x : xs) worst = std::max(worst, std::abs(bump_derivative(x, m)));
    EXPECT_LE(worst, bump_derivative_bound(m)) << "m=" << m;
  }
}

TEST(ComposeDerivatives, ExpOfLinear) {
  // f = exp, g = 3x at x = 0: (f o g)^(k) = 3^k
  const std::vector<double> f{1.0, 1.0, 1.0, 1.0};
  const std::vector<double> g{3.0, 0.0, 0.0, 0.0};
  const auto d = compose_derivatives(f, g);
  ASSERT_EQ(d.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(d[k], std::pow(3.0, k + 1), 1e-12);
}

TEST(SmoothnessFactor, LogOfLargestDerivative) {
  DerivativeTable t;
  t.samples = {0.0};
  t.values = {{std::exp(2.0)}, {std::exp(6.0)}};
  EXPECT_NEAR(smoothness_factor(t, 2), 3.0, 1e-12);
  t.values = {{0.5}, {0.0}};
  EXPECT_EQ(smoothness_factor(t, 2), 0.0);
}

TEST(SmoothFnParams, RejectsBadBand) {
  EXPECT_THROW(cut(0.0, SmoothFnParams{0.0, -1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(bar(0.0, 0.0), InvalidArgument);
}
