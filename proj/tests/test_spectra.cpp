#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fga/eigensolvers.hpp"
#include "fga/error.hpp"
#include "fga/spectra.hpp"

#include <random>

using namespace fga;

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

TEST(Spectrum, HarmonicOscillatorLevels) {
  const GridSpec g = build_grid(1, 64, 12.0);
  const auto h = make_hamiltonian(*isotropic_quadratic(1, 1.0), g);
  const SpectralReport r = solve_spectrum(h, 3, 1e-10);
  EXPECT_EQ(r.method, SolverMethod::dense);
  EXPECT_NEAR(r.lambda0, 1.0, 1e-8);
  EXPECT_NEAR(r.lambda1, 3.0, 1e-8);
  EXPECT_NEAR(r.gap, 2.0, 1e-8);
  EXPECT_FALSE(r.degenerate);
  EXPECT_LT(eigen_residual(h, r.ground, r.lambda0), 1e-8);
}

TEST(Spectrum, LanczosAgreesWithDense) {
  const GridSpec g = build_grid(2, 32, 10.0);
  const auto h = make_hamiltonian(*quadratic({0.0, 0.0}, {1.0, 2.0}), g);
  SolveOptions dense;
  dense.how_many = 3;
  SolveOptions lan = dense;
  lan.dense_limit = 0;
  lan.tol = 1e-9;
  const auto a = solve_spectrum(h, dense);
  const auto b = solve_spectrum(h, lan);
  EXPECT_EQ(b.method, SolverMethod::lanczos);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-8);
  EXPECT_LE(b.residual0, 1e-9);
}

TEST(Spectrum, FreeTorusHasZeroGroundEnergy) {
  const GridSpec g = build_grid(1, 32, 2.0);
  const auto h = make_hamiltonian(*constant_potential(0.0), g);
  const auto r = solve_spectrum(h, 2, 1e-10);
  EXPECT_NEAR(r.lambda0, 0.0, 1e-10);
  // k = +-1 pair
  EXPECT_NEAR(r.lambda1, 4.0 * kPi2 / 4.0, 1e-8);
}

TEST(Spectrum, DirichletIntervalApproachesContinuum) {
  const GridSpec g = build_grid(1, 512, 8.0);
  const auto h = make_hamiltonian(*constant_potential(0.0), g);
  const auto hd = dirichlet_restrict(h, RestrictionMask{BallMask{1.0, false, {}}, g});
  EXPECT_LT(hd.dimension(), g.size());
  const auto r = solve_spectrum(hd, 2, 1e-9);
  // interval of length 2
  EXPECT_NEAR(r.lambda0, kPi2 / 4.0, 0.03 * kPi2 / 4.0);
  EXPECT_TRUE(check_gap_bound(r, 2.0).pass);
}

TEST(Spectrum, MaskIndicatorShapes) {
  const GridSpec g = build_grid(2, 16, 4.0);
  const auto ball = mask_indicator(RestrictionMask{BallMask{1.0, false, {}}, g});
  const auto box = mask_indicator(RestrictionMask{BallMask{1.0, true, {}}, g});
  std::size_t nb = 0, nx = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    nb += ball[i];
    nx += box[i];
    if (ball[i]) EXPECT_TRUE(box[i]);
  }
  EXPECT_GT(nb, 0u);
  EXPECT_GT(nx, nb);
}

TEST(Spectrum, FrequencyProjectionKeepsBand) {
  const GridSpec g = build_grid(1, 32, 1.0);
  std::mt19937_64 rng(5);
  const auto psi = frequency_project(WaveState::random(g, rng), 4.0);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  const auto c = fourier_coefficients(psi);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(g.label(static_cast<int>(i))) > 4) EXPECT_NEAR(std::abs(c[i]), 0.0, 1e-13);
}

TEST(Spectrum, SymmetricEigenFullAndPartial) {
  Eigen::MatrixXd m(3, 3);
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto all = symmetric_eigen(m);
  EXPECT_NEAR(all.values(0), 2.0 - std::sqrt(2.0), 1e-12);
  const auto one = symmetric_eigen(m, 1);
  EXPECT_EQ(one.values.size(), 1);
  EXPECT_NEAR(one.values(0), all.values(0), 1e-12);
}

TEST(Spectrum, FreeTorusExcitedPairIsDegenerate) {
  const GridSpec g = build_grid(1, 32, 2.0);
  const auto h = make_hamiltonian(*constant_potential(0.0), g);
  auto r = solve_spectrum(h, 3, 1e-10);
  EXPECT_NEAR(r.eigenvalues[1], r.eigenvalues[2], 1e-8);
}
