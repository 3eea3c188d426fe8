#include <gtest/gtest.h>

#include <cmath>

#include "fga/verify.hpp"

using namespace fga;

TEST(Aliasing, ExactAboveThreshold) {
  const auto V = trig_polynomial(1.0, 0.5, {TrigTerm{{3}, 1.0, 0.25}});
  const auto ok = probe_aliasing_exactness(3, 10, *V, 1);
  EXPECT_TRUE(ok.exact_regime);
  EXPECT_LE(ok.max_discrepancy, 1e-12);
  const auto bad = probe_aliasing_exactness(3, 6, *V, 1);
  EXPECT_FALSE(bad.exact_regime);
  EXPECT_GT(bad.max_discrepancy, 1e-6);
}

TEST(FundamentalGap, FlatIntervalAttainsBound) {
  const auto r = probe_fundamental_gap(flat_interval_instance(1024));
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.relative_excess, 2e-3);
}

TEST(FundamentalGap, FamilyIsDeterministic) {
  const auto a = fundamental_gap_family(4, 2, 2);
  const auto b = fundamental_gap_family(4, 2, 2);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a[i].diameter, b[i].diameter);
}

TEST(Weyl, HarmonicCurvatureIsTwo) {
  const GridSpec g = build_grid(1, 64, 16.0);
  WaveState psi(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.position(i)[0];
    psi[i] = std::exp(-x * x);
  }
  psi.normalize();
  WeylOptions o;
  o.lines = 6;
  const auto r = probe_weyl_convexity(*isotropic_quadratic(1, 1.0), psi, o);
  EXPECT_FALSE(r.violation);
  EXPECT_NEAR(r.b_curvature, 2.0, 1e-6);
  EXPECT_GE(r.min_second_difference, -1e-8);
}

TEST(Suites, NamesAndUnknown) {
  const auto& names = suite_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "aliasing"), names.end());
  EXPECT_ANY_THROW(run_suite("nonsense"));
}

TEST(Suites, AliasingAndSmoothnessPass) {
  for (const char* s : {"aliasing", "smoothness"}) {
    const auto rep = run_suite(s, 1);
    EXPECT_TRUE(rep.pass()) << s << " failures " << rep.failures();
    EXPECT_FALSE(rep.records.empty());
  }
}
