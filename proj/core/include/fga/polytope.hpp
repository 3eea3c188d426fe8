#pragma once

#include <vector>

#include "fga/potential.hpp"

namespace fga {

/// Convex polytope {x : a_j.x <= b_j} with unit normals.
struct DrumInstance {
  std::vector<Halfplane> planes;
  /// Enclosing-ball radius about the origin.
  double R = 0.0;
  double eps0 = 0.1;

  int dimension() const { return planes.empty() ? 0 : static_cast<int>(planes.front().a.size()); }
};

/// Normalizes every (a_j, b_j) to a unit normal, then rejects polytopes with
/// empty interior or unbounded extent. R <= 0 means "compute it"; a supplied R
/// is checked against the vertices in 2D and 3D.
DrumInstance make_drum(std::vector<Halfplane> planes, double R = 0.0, double eps0 = 0.1);

/// Largest inscribed ball.
struct ChebyshevBall {
  std::vector<double> center;
  double radius = 0.0;
};
ChebyshevBall chebyshev_ball(const std::vector<Halfplane>& planes);

/// Vertices by enumeration of n-subsets of the constraints.
std::vector<std::vector<double>> polytope_vertices(const std::vector<Halfplane>& planes);

/// True when the polytope is bounded (no recession direction).
bool polytope_bounded(const std::vector<Halfplane>& planes);

/// Affine image x' = (x - center) / inradius of a drum. The result contains
/// the unit ball with b_j >= 1; eigenvalues map back as lambda = lambda' / inradius^2.
struct NormalizedDrum {
  DrumInstance drum;
  std::vector<double> center;
  double inradius = 1.0;
  /// Largest vertex norm after normalization.
  double circumradius = 0.0;
  double to_original(double lambda_normalized) const { return lambda_normalized / (inradius * inradius); }
};
NormalizedDrum normalize_drum(const DrumInstance& drum);

/// Largest distance between two vertices.
double polytope_diameter(const std::vector<Halfplane>& planes);

/// Regular k-gon with the given circumradius centered at the origin.
std::vector<Halfplane> regular_polygon(int k, double circumradius);
/// Axis-aligned box [lo, hi]^n.
std::vector<Halfplane> box_planes(int n, double lo, double hi);

}  // namespace fga
