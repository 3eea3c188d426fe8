#include "fga/fd_oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fga/error.hpp"
#include "fga/polytope.hpp"

namespace fga {
namespace {

constexpr double kMinArm = 1e-3;

bool inside(const std::vector<Halfplane>& planes, double x, double y) {
  for (const auto& p : planes)
    if (!(p.a[0] * x + p.a[1] * y < p.b - 1e-14)) return false;
  return true;
}

// Fraction of one grid step from (x, y) along (dx, dy) to the first face.
double arm_fraction(const std::vector<Halfplane>& planes, double x, double y, double dx, double dy) {
  double t = 1.0;
  for (const auto& p : planes) {
    const double rate = p.a[0] * dx + p.a[1] * dy;
    if (rate <= 0.0) continue;
    const double gap = p.b - (p.a[0] * x + p.a[1] * y);
    t = std::min(t, gap / rate);
  }
  return std::max(t, kMinArm);
}

}  // namespace

double fd_dirichlet_lambda0(const std::vector<Halfplane>& planes, int resolution) {
  if (resolution < 8) throw InvalidArgument("fd_dirichlet_lambda0: resolution must be >= 8");
  for (const auto& p : planes)
    if (p.a.size() != 2) throw InvalidArgument("fd_dirichlet_lambda0: polygon must be two-dimensional");
  const auto verts = polytope_vertices(planes);
  if (verts.size() < 3) throw InvalidArgument("fd_dirichlet_lambda0: degenerate polygon");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& v : verts) {
    x0 = std::min(x0, v[0]);
    x1 = std::max(x1, v[0]);
    y0 = std::min(y0, v[1]);
    y1 = std::max(y1, v[1]);
  }
  const double h = std::max(x1 - x0, y1 - y0) / resolution;
  const int nx = static_cast<int>(std::ceil((x1 - x0) / h)) + 1;
  const int ny = static_cast<int>(std::ceil((y1 - y0) / h)) + 1;

  std::vector<int> id(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), -1);
  auto at = [&](int i, int j) -> int& { return id[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)]; };
  int count = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (inside(planes, x0 + i * h, y0 + j * h)) at(i, j) = count++;
  if (count == 0) throw InvalidArgument("fd_dirichlet_lambda0: no interior nodes");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(count) * 5);
  const double inv_h2 = 1.0 / (h * h);
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int row = at(i, j);
      if (row < 0) continue;
      double diag = 0.0;
      for (int d = 0; d < 4; ++d) {
        const int ii = i + di[d];
        const int jj = j + dj[d];
        const int col = (ii >= 0 && ii < nx && jj >= 0 && jj < ny) ? at(ii, jj) : -1;
        if (col >= 0) {
          diag += inv_h2;
          trip.emplace_back(row, col, -inv_h2);
        } else {
          const double theta = arm_fraction(planes, x0 + i * h, y0 + j * h, di[d] * h, dj[d] * h);
          diag += inv_h2 / theta;
        }
      }
      trip.emplace_back(row, row, diag);
    }
  Eigen::SparseMatrix<double> A(count, count);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw Error("fd_dirichlet_lambda0: factorization failed");

  // inverse iteration from a positive start converges to the positive ground mode
  Eigen::VectorXd v = Eigen::VectorXd::Ones(count).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = solver.solve(v);
    w.normalize();
    const double next = w.dot(A * w);
    v = std::move(w);
    if (it > 2 && std::abs(next - lambda) <= 1e-13 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

FdOracleResult fd_oracle(const std::vector<Halfplane>& planes, int resolution) {
  FdOracleResult r;
  r.coarse_resolution = resolution;
  r.fine_resolution = 2 * resolution;
  r.coarse = fd_dirichlet_lambda0(planes, resolution);
  r.fine = fd_dirichlet_lambda0(planes, 2 * resolution);
  r.lambda0 = (4.0 * r.fine - r.coarse) / 3.0;
  return r;
}

}  // namespace fga
