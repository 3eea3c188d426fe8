#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

#include "fga/fft.hpp"
#include "fga/grid.hpp"
#include "fga/potential.hpp"

namespace fga {

/// Matrix-free H = K + V on the discrete torus, optionally compressed to a
/// subset of grid points (P H P), which is how Dirichlet conditions are
/// emulated. Immutable after construction and shareable across threads.
class HamiltonianOp {
 public:
  HamiltonianOp(GridSpec grid, std::vector<double> potential_diag);

  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<double>& potential_diag() const noexcept { return potential_; }
  /// 4 pi^2 |k|^2 / L^2 in FFT bin order.
  const std::vector<double>& kinetic_multiplier() const noexcept { return *kinetic_; }

  bool restricted() const noexcept { return !active_.empty(); }
  /// 1 for points kept by the compression, empty when unrestricted.
  const std::vector<std::uint8_t>& active() const noexcept { return active_; }
  bool is_active(std::size_t i) const noexcept { return active_.empty() || active_[i] != 0; }
  /// Flat indices of active points, ascending.
  std::vector<std::size_t> active_indices() const;
  /// Dimension of the space the operator acts on.
  std::size_t dimension() const noexcept { return dimension_; }

  /// max kinetic multiplier + max potential; bounds the operator norm.
  double norm_estimate() const noexcept;
  double kinetic_max() const noexcept;
  double potential_max() const noexcept;

  /// out = H in. Both spans cover the full grid; inactive entries of out are zero.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

  /// Copy compressed to the intersection of the current active set and mask.
  HamiltonianOp restrict_to(const std::vector<std::uint8_t>& mask) const;

  /// Same kinetic part and active set with another potential.
  HamiltonianOp with_potential(std::vector<double> potential_diag) const;

 private:
  GridSpec grid_;
  std::vector<double> potential_;
  std::shared_ptr<const std::vector<double>> kinetic_;
  std::shared_ptr<const FftPlan> plan_;
  std::vector<std::uint8_t> active_;
  std::size_t dimension_ = 0;
};

HamiltonianOp make_hamiltonian(const PotentialSpec& potential, const GridSpec& grid);

/// Inverse DFT of (multiplier * DFT(psi)); not normalized.
WaveState apply_kinetic(const WaveState& psi);
WaveState apply_hamiltonian(const HamiltonianOp& h, const WaveState& psi);

/// Rayleigh quotient <psi|H psi>/<psi|psi>.
double energy(const HamiltonianOp& h, const WaveState& psi);

/// Single-axis kinetic matrix K_N (real symmetric, N x N) in storage order.
Eigen::MatrixXd kinetic_matrix_1d(int N, double L);

/// Dense real symmetric matrix of h over its active points (ascending flat index).
Eigen::MatrixXd dense_matrix(const HamiltonianOp& h);

}  // namespace fga
