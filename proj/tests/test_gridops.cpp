#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fga/error.hpp"
#include "fga/fft.hpp"
#include "fga/grid.hpp"
#include "fga/hamiltonian.hpp"
#include "fga/potential.hpp"

using namespace fga;

TEST(Grid, Validation) {
  EXPECT_TRUE(is_power_of_two(64));
  EXPECT_FALSE(is_power_of_two(100));
  EXPECT_THROW(build_grid(1, 100, 1.0), InvalidArgument);
  EXPECT_THROW(build_grid(0, 16, 1.0), InvalidArgument);
  EXPECT_THROW(build_grid(1, 16, -1.0), InvalidArgument);
  EXPECT_THROW(build_grid(3, 1024, 1.0), InvalidArgument);
}

TEST(Grid, LabelsAndPositions) {
  const GridSpec g = build_grid(2, 8, 4.0);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_EQ(axis_labels(g).front(), -4);
  EXPECT_EQ(axis_labels(g).back(), 3);
  EXPECT_EQ(g.coord(-4), 0);
  EXPECT_EQ(g.coord(4), 0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat_index(g.labels(i)), i);
  const std::vector<int> lab{-1, 2};
  const auto x = g.position(g.flat_index(lab));
  EXPECT_DOUBLE_EQ(x[0], -0.5);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(Fourier, PlaneWaveIsDelta) {
  const GridSpec g = build_grid(2, 8, 1.0);
  const std::vector<int> k{3, -2};
  const WaveState p = WaveState::plane_wave(g, k);
  EXPECT_NEAR(p.norm(), 1.0, 1e-14);
  const auto c = fourier_coefficients(p);
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_NEAR(std::abs(c[i]), i == g.flat_index(k) ? 1.0 : 0.0, 1e-12);
}

TEST(Fourier, RoundTripIsUnitary) {
  const GridSpec g = build_grid(1, 32, 2.0);
  std::mt19937_64 rng(3);
  const WaveState psi = WaveState::random(g, rng);
  const auto c = fourier_coefficients(psi);
  EXPECT_NEAR(norm2(c), 1.0, 1e-12);
  const WaveState back = from_fourier_coefficients(g, c);
  for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_NEAR(std::abs(back[i] - psi[i]), 0.0, 1e-13);
}

TEST(Kinetic, PlaneWaveEigenvalue) {
  const GridSpec g = build_grid(1, 16, 3.0);
  const std::vector<int> k{5};
  const WaveState p = WaveState::plane_wave(g, k);
  const WaveState kp = apply_kinetic(p);
  const double expected = 4.0 * std::numbers::pi * std::numbers::pi * 25.0 / 9.0;
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(std::abs(kp[i] - expected * p[i]), 0.0, 1e-10);
}

TEST(Kinetic, DenseMatrixMatchesMatrixFree) {
  const GridSpec g = build_grid(1, 16, 3.0);
  const auto K = kinetic_matrix_1d(16, 3.0);
  EXPECT_NEAR((K - K.transpose()).norm(), 0.0, 1e-12);
  const HamiltonianOp h = make_hamiltonian(*constant_potential(0.0), g);
  EXPECT_NEAR((dense_matrix(h) - K).norm(), 0.0, 1e-9);
}

TEST(Potential, EvaluateAndValidate) {
  const auto q = quadratic({1.0}, {2.0});
  EXPECT_DOUBLE_EQ(evaluate(*q, std::vector<double>{3.0}), 8.0);
  EXPECT_EQ(potential_dimension(*constant_potential(1.0)), 0);
  EXPECT_THROW(quadratic({0.0}, {-1.0}), InvalidArgument);
  const GridSpec g = build_grid(1, 8, 1.0);
  const auto t = tabulated(g, std::vector<double>(8, 2.0));
  EXPECT_THROW(eval_potential(*t, build_grid(1, 16, 1.0)), GridMismatch);
}

TEST(Potential, SaturatedCapsInner) {
  const auto s = saturated(isotropic_quadratic(1, 1.0), 4.0, 1.0);
  EXPECT_NEAR(evaluate(*s, std::vector<double>{1.0}), 1.0, 1e-12);
  EXPECT_LE(evaluate(*s, std::vector<double>{10.0}), 5.0);
}

TEST(Potential, TrigPolynomialEvaluates) {
  const auto t = trig_polynomial(2.0, 1.0, {TrigTerm{{1}, 0.5, 0.0}});
  EXPECT_NEAR(evaluate(*t, std::vector<double>{0.0}), 1.5, 1e-14);
  EXPECT_NEAR(evaluate(*t, std::vector<double>{1.0}), 0.5, 1e-14);
}
