#include <gtest/gtest.h>

#include <cmath>

#include "fga/adiabatic.hpp"
#include "fga/spectra.hpp"

using namespace fga;

TEST(Schedule, StepCountRespectsStability) {
  EXPECT_GE(stable_step_count(1.0, 100.0), 1000);
  const Schedule s = make_schedule(2.0, 50.0, 10);
  EXPECT_LE(s.dt() * 50.0, 0.1 + 1e-12);
}

TEST(RuntimeRule, Formula) {
  EXPECT_DOUBLE_EQ(choose_total_time(2.0, 0.5, 0.1, 1.0), 4.0 / (0.1 * 0.125));
  EXPECT_DOUBLE_EQ(choose_total_time(2.0, 0.5, 0.1, 3.0), 3.0 * 4.0 / (0.1 * 0.125));
}

TEST(Evolve, StationaryStateStaysPut) {
  const GridSpec g = build_grid(1, 64, 12.0);
  const auto V = isotropic_quadratic(1, 1.0);
  const auto h = make_hamiltonian(*V, g);
  const auto r = solve_spectrum(h, 2, 1e-10);
  Schedule s = make_schedule(1.0, h.norm_estimate());
  s.trace_overlaps = false;
  const auto out = evolve(r.ground, *V, *V, s);
  EXPECT_GT(overlap(out.state, r.ground), 1.0 - 1e-6);
  EXPECT_LT(out.max_norm_drift, 1e-10);
  EXPECT_NEAR(measure_energy(h, out.state), 1.0, 1e-5);
}

TEST(Evolve, SlowDeformationTracksGroundState) {
  const GridSpec g = build_grid(1, 64, 12.0);
  const auto V0 = isotropic_quadratic(1, 1.0);
  const auto VT = quadratic({0.5}, {1.0});
  const auto h0 = make_hamiltonian(*V0, g);
  const auto hT = make_hamiltonian(*VT, g);
  const auto g0 = solve_spectrum(h0, 2, 1e-10).ground;
  const auto gT = solve_spectrum(hT, 2, 1e-10).ground;
  Schedule s = make_schedule(20.0, std::max(h0.norm_estimate(), hT.norm_estimate()));
  s.trace_overlaps = false;
  const auto out = evolve(g0, *V0, *VT, s);
  EXPECT_GT(overlap(out.state, gT), 0.99);
  EXPECT_FALSE(out.trace.times.empty());
}

TEST(InitialState, ProductGroundState) {
  const GridSpec g = build_grid(2, 16, 12.0);
  const auto init = prepare_initial_state(g, 9.0);
  EXPECT_NEAR(init.state.norm(), 1.0, 1e-12);
  EXPECT_GT(init.gap_single, 0.0);
  EXPECT_NEAR(init.energy, 2.0 * init.lambda0_single, 1e-8);
}

TEST(InitialState, SamplingSelectsGroundWithHighProbability) {
  const GridSpec g = build_grid(1, 32, 12.0);
  InitialStateOptions o;
  o.sampling = true;
  o.seed = 11;
  const auto init = prepare_initial_state(g, 9.0, o);
  EXPECT_GT(init.copies, 0);
  ASSERT_EQ(init.register_ground.size(), 1u);
  EXPECT_TRUE(init.register_ground[0]);
}

TEST(Measure, SampleModeReturnsAnEigenvalue) {
  const GridSpec g = build_grid(1, 32, 12.0);
  const auto h = make_hamiltonian(*isotropic_quadratic(1, 1.0), g);
  const auto r = solve_spectrum(h, 2, 1e-10);
  std::mt19937_64 rng(2);
  EXPECT_NEAR(measure_energy(h, r.ground, MeasureMode::sample, rng), r.lambda0, 1e-8);
}
