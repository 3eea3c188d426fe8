#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fga/error.hpp"
#include "fga/pipelines.hpp"

using namespace fga;

TEST(ThetaConstants, DefaultsAndStrictness) {
  ThetaConstants c;
  for (const auto& name : ThetaConstants::names()) EXPECT_DOUBLE_EQ(c.get(name), 1.0);
  c.set("sigma_constant", 2.0);
  EXPECT_DOUBLE_EQ(c.get("sigma_constant"), 2.0);
  EXPECT_THROW(c.set("sigma_constnat", 1.0), InvalidArgument);
  EXPECT_THROW(c.set("b_constant", 0.0), InvalidArgument);
}

TEST(FgaParams, UnscaledChainOverflows) {
  const FgaParams p = derive_fga_params(1, 1.0, 3.0, 12.0, 0.1);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(p.E0, 10.0 * (4.0 * pi2 + 1.0), 1e-9);
  EXPECT_NEAR(p.sigma, 0.1 / (81.0 * std::pow(p.E0, 1.5)), 1e-18);
  EXPECT_TRUE(p.overflow);
  EXPECT_FALSE(p.audit.empty());
}

TEST(FgaParams, ConstantsScaleTheChain) {
  ThetaConstants c;
  c.set("sigma_constant", 2.0);
  const FgaParams a = derive_fga_params(1, 1.0, 3.0, 12.0, 0.1);
  const FgaParams b = derive_fga_params(1, 1.0, 3.0, 12.0, 0.1, c);
  EXPECT_NEAR(b.sigma / a.sigma, 2.0, 1e-12);
  EXPECT_NEAR(b.b / a.b, 1.0 / 64.0, 1e-9);
}

TEST(FgaParams, ScaledFromHarmonicBowl) {
  const GridSpec g = build_grid(1, 128, 12.0);
  const FgaParams p = scaled_fga_params(*isotropic_quadratic(1, 1.0), g, 3.0, 0.1);
  EXPECT_TRUE(p.scaled);
  EXPECT_NEAR(p.a, 1.0, 1e-9);
  EXPECT_NEAR(p.b, 9.0, 1e-9);
  EXPECT_NEAR(p.c, 16.0, 1e-9);
  EXPECT_NO_THROW(validate_fga_params(p));
  const BowlReport bowl = check_bowl_conditions(*isotropic_quadratic(1, 1.0), p, 500);
  EXPECT_TRUE(bowl.pass()) << (bowl.violated().empty() ? "" : bowl.violated().front());
}

TEST(FgaParams, BowlDetectsNonconvexity) {
  // 1 - cos(pi x / 3) is concave for |x| > 1.5
  const auto V = trig_polynomial(12.0, 1.0, {TrigTerm{{2}, -1.0, 0.0}});
  FgaParams p;
  p.n = 1;
  p.N = 128;
  p.L = 12.0;
  p.r = 3.0;
  p.a = 1.0;
  p.b = 9.0;
  p.c = 16.0;
  const BowlReport bowl = check_bowl_conditions(*V, p, 200);
  EXPECT_FALSE(bowl.convex);
  EXPECT_FALSE(bowl.pass());
}

TEST(FgaParams, ValidateRejectsOrdering) {
  FgaParams p = derive_fga_params(1, 1.0, 3.0, 12.0, 0.1);
  p.b = 20.0;
  p.c = 10.0;
  EXPECT_THROW(validate_fga_params(p), InvalidArgument);
  p.waived = {"b<=c"};
  EXPECT_NO_THROW(validate_fga_params(p));
}

TEST(RunFga, ShortToyRun) {
  const GridSpec g = build_grid(1, 64, 12.0);
  const auto V = isotropic_quadratic(1, 1.0);
  const FgaParams p = scaled_fga_params(*V, g, 3.0, 0.1);
  FgaOptions o;
  o.total_time = 2.0;
  o.trace_overlaps = false;
  o.bowl_samples = 200;
  const FgaResult r = run_fga(*V, p, g, o);
  EXPECT_EQ(r.path_gaps.size(), 5u);
  EXPECT_GT(r.min_gap, 0.0);
  EXPECT_DOUBLE_EQ(r.total_time, 2.0);
  for (std::size_t i = 0; i < r.path_lambda1.size(); ++i) EXPECT_LE(r.path_lambda1[i], r.lambda1_bounds[i] + 1e-6);
  EXPECT_LT(r.max_norm_drift, 1e-8);
  EXPECT_GE(r.lambda0_estimate, r.final_report.lambda0 - 1e-9);
}

TEST(Drum, ParameterChainAudit) {
  const auto nd = normalize_drum(make_drum(box_planes(2, 0.0, 1.0)));
  const DrumParams p = derive_drum_params(nd.drum);
  EXPECT_GT(p.strength, 0.0);
  // 2^32 (sqrt 2)^24 / 0.1^6
  EXPECT_NEAR(p.b_closed_form / 1.759218604441600e19, 1.0, 1e-9);
  EXPECT_NE(std::find(p.fga.waived.begin(), p.fga.waived.end(), "r<L/2"), p.fga.waived.end());
  EXPECT_TRUE(p.barrier != nullptr);
}

TEST(Drum, DirectModeCoarse) {
  DrumOptions o;
  o.N = 32;
  o.fd_check = false;
  o.masked_check = true;
  const DrumResult r = solve_drum(make_drum(box_planes(2, 0.0, 1.0)), DrumMode::direct, o);
  const double target = 2.0 * std::numbers::pi * std::numbers::pi;
  EXPECT_LT(r.lambda0_estimate, target);
  EXPECT_GT(r.lambda0_estimate, 0.7 * target);
  EXPECT_TRUE(r.sweep_monotone);
  ASSERT_TRUE(r.masked_lambda0.has_value());
  EXPECT_TRUE(r.bracket_ok);
}

TEST(RunFga, StepBudgetIsEnforced) {
  const GridSpec g = build_grid(1, 32, 12.0);
  const auto V = isotropic_quadratic(1, 1.0);
  const FgaParams p = scaled_fga_params(*V, g, 3.0, 0.1);
  FgaOptions o;
  o.total_time = 10.0;
  o.max_steps = 10;
  o.bowl_samples = 100;
  EXPECT_THROW(run_fga(*V, p, g, o), InvalidArgument);
}
