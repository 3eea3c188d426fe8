#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "fga/hamiltonian.hpp"

namespace fga {

/// Lowest eigenpairs of a real symmetric matrix. Eigenvectors are columns.
struct DenseEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// LAPACK dsyevr. count <= 0 requests the full spectrum.
DenseEigen symmetric_eigen(const Eigen::MatrixXd& matrix, int count = -1);

/// Dense diagonalization of h over its active points. Eigenvector rows follow
/// h.active_indices().
DenseEigen dense_eigen(const HamiltonianOp& h, int count = -1);

struct LanczosOptions {
  int how_many = 2;
  double tol = 1e-8;
  /// Initial Krylov dimension; doubled on each escalation.
  int krylov = 64;
  /// Budget escalations after the first attempt.
  int max_escalations = 5;
  /// Thick-restart cycles per budget.
  int cycles_per_budget = 40;
  std::uint64_t seed = 0x5eed;
  /// Optional start vector over the full grid (used when non-empty).
  std::vector<cplx> start;
};

struct LanczosResult {
  std::vector<double> values;
  /// Full-grid eigenvectors (zero on inactive points), unit norm.
  std::vector<std::vector<cplx>> vectors;
  /// Explicit residuals |H v - lambda v|.
  std::vector<double> residuals;
  int iterations = 0;  // operator applications
  int escalations = 0;
};

/// Thick-restart Lanczos with full reorthogonalization for the lowest
/// how_many eigenpairs. Throws ConvergenceError when the budget is exhausted.
LanczosResult lanczos_lowest(const HamiltonianOp& h, const LanczosOptions& options);

}  // namespace fga
