#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fga/error.hpp"
#include "fga/fd_oracle.hpp"
#include "fga/polytope.hpp"

using namespace fga;

namespace {
std::vector<Halfplane> unit_square() { return box_planes(2, 0.0, 1.0); }
}  // namespace

TEST(Polytope, ChebyshevBallOfSquare) {
  const auto c = chebyshev_ball(unit_square());
  EXPECT_NEAR(c.radius, 0.5, 1e-9);
  EXPECT_NEAR(c.center[0], 0.5, 1e-9);
  EXPECT_NEAR(c.center[1], 0.5, 1e-9);
}

TEST(Polytope, VerticesAndDiameter) {
  EXPECT_EQ(polytope_vertices(unit_square()).size(), 4u);
  EXPECT_NEAR(polytope_diameter(unit_square()), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(polytope_vertices(regular_polygon(7, 1.0)).size(), 7u);
}

TEST(Polytope, UnboundedAndEmptyRejected) {
  EXPECT_FALSE(polytope_bounded({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}}));
  EXPECT_THROW(make_drum({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}}), InvalidArgument);
  EXPECT_THROW(make_drum({{{1.0, 0.0}, -1.0}, {{-1.0, 0.0}, -1.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}}),
               InvalidArgument);
}

TEST(Polytope, NormalizationContainsUnitBall) {
  const auto nd = normalize_drum(make_drum({{{2.0, 0.0}, 2.0}, {{-1.0, 0.0}, 0.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 0.0}}));
  EXPECT_NEAR(nd.inradius, 0.5, 1e-9);
  for (const auto& p : nd.drum.planes) {
    EXPECT_NEAR(std::hypot(p.a[0], p.a[1]), 1.0, 1e-12);
    EXPECT_GE(p.b, 1.0 - 1e-9);
  }
  EXPECT_NEAR(nd.circumradius, std::sqrt(2.0), 1e-9);
  EXPECT_DOUBLE_EQ(nd.to_original(1.0), 4.0);
}

TEST(FdOracle, SquareAndTriangle) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(fd_dirichlet_lambda0(unit_square(), 64), 2.0 * pi2, 0.01 * 2.0 * pi2);
  const double s = std::sqrt(0.5);
  const std::vector<Halfplane> tri{{{-1.0, 0.0}, 0.0}, {{0.0, -1.0}, 0.0}, {{s, s}, s}};
  const auto r = fd_oracle(tri, 64);
  EXPECT_NEAR(r.lambda0, 5.0 * pi2, 0.01 * 5.0 * pi2);
  EXPECT_EQ(r.fine_resolution, 128);
}
