#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fga/hamiltonian.hpp"
#include "fga/potential.hpp"

namespace fga {

enum class SolverMethod { dense, lanczos };

std::string to_string(SolverMethod m);

struct SpectralReport {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  /// lambda1 - lambda0, or 0 when degenerate.
  double gap = 0.0;
  bool degenerate = false;
  WaveState ground;
  double residual0 = 0.0;
  double residual1 = 0.0;
  SolverMethod method = SolverMethod::dense;
  int iterations = 0;
  /// Lowest how_many eigenvalues, ascending.
  std::vector<double> eigenvalues;
  /// Eigenvectors matching eigenvalues (full grid), filled when requested.
  std::vector<WaveState> states;
};

struct SolveOptions {
  int how_many = 2;
  double tol = 1e-8;
  /// Active dimensions up to this use the dense path.
  std::size_t dense_limit = 4096;
  bool keep_states = false;
  /// Forwarded to the Lanczos path.
  int krylov = 64;
  std::uint64_t seed = 0x5eed;
  std::vector<cplx> start;
};

/// Gaps below this are reported as degenerate.
inline constexpr double kDegenerateGap = 1e-10;

SpectralReport solve_spectrum(const HamiltonianOp& h, const SolveOptions& options);
SpectralReport solve_spectrum(const HamiltonianOp& h, int how_many = 2, double tol = 1e-8);

/// Euclidean or max-norm ball.
struct BallMask {
  double radius = 1.0;
  bool linf = false;
  std::vector<double> center;  // empty means the origin
};
/// Intersection of half-spaces a.x <= b (normals need not be unit length here).
struct PolytopeMask {
  std::vector<Halfplane> planes;
};
/// Frequencies with |k|_2 <= K.
struct FrequencyBallMask {
  double K = 0.0;
};

struct RestrictionMask {
  std::variant<BallMask, PolytopeMask, FrequencyBallMask> shape;
  GridSpec grid;

  bool is_position() const noexcept { return !std::holds_alternative<FrequencyBallMask>(shape); }
};

/// 0/1 indicator in storage order. Position masks keep points strictly inside
/// the shape; frequency masks are indexed by centered frequency label.
std::vector<std::uint8_t> mask_indicator(const RestrictionMask& mask);

/// P H P on the masked points.
HamiltonianOp dirichlet_restrict(const HamiltonianOp& h, const RestrictionMask& mask);

/// Zeroes Fourier coefficients with |k|_2 > K and renormalizes.
WaveState frequency_project(const WaveState& psi, double K);

struct GapCheck {
  bool pass = false;
  double bound = 0.0;   // 3 pi^2 / diameter^2
  double margin = 0.0;  // gap - bound
};

GapCheck check_gap_bound(const SpectralReport& report, double diameter);

/// Residual |H psi - lambda psi| for a unit state.
double eigen_residual(const HamiltonianOp& h, const WaveState& psi, double lambda);

}  // namespace fga
