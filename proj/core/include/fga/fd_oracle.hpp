#pragma once

#include <vector>

#include "fga/potential.hpp"

namespace fga {

/// Lowest Dirichlet Laplacian eigenvalue of a 2D convex polygon on a uniform
/// grid with `resolution` cells across the larger side of its bounding box.
/// Boundary arms use the symmetric Gibou-Fedkiw stencil.
double fd_dirichlet_lambda0(const std::vector<Halfplane>& planes, int resolution);

struct FdOracleResult {
  double lambda0 = 0.0;  // Richardson extrapolation
  double coarse = 0.0;
  double fine = 0.0;
  int coarse_resolution = 0;
  int fine_resolution = 0;
};

/// Richardson over (resolution, 2 resolution) assuming second-order error.
FdOracleResult fd_oracle(const std::vector<Halfplane>& planes, int resolution = 512);

}  // namespace fga
