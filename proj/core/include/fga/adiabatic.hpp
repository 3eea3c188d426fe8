#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fga/hamiltonian.hpp"
#include "fga/potential.hpp"

namespace fga {

/// Linear schedule s(t) = t / T discretized into equal steps.
struct Schedule {
  double total_time = 1.0;
  long steps = 1;
  /// Trace every stride steps (0 picks about 64 samples).
  long trace_stride = 0;
  /// Compute instantaneous ground overlaps at traced times (one eigensolve each).
  bool trace_overlaps = true;

  double dt() const noexcept { return total_time / static_cast<double>(steps); }
};

/// Steps needed so that dt <= 0.1 / norm_estimate.
long stable_step_count(double total_time, double norm_estimate);
Schedule make_schedule(double total_time, double norm_estimate, long min_steps = 1);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> overlaps;
  std::vector<double> energies;
  std::vector<double> norms;
};

struct InitialStateOptions {
  /// Emulate measure-and-select over maximally mixed copies instead of taking
  /// the ground state directly.
  bool sampling = false;
  /// Copies per register; 0 means ceil(N ln(4n)).
  long copies = 0;
  std::uint64_t seed = 1;
};

struct InitialState {
  WaveState state;
  /// Single-register H_N spectrum bottom.
  double lambda0_single = 0.0;
  double gap_single = 0.0;
  bool degenerate = false;
  /// Energy of the product state under H_Q(0).
  double energy = 0.0;
  /// Per register: whether the selected copy was the ground state.
  std::vector<bool> register_ground;
  long copies = 0;
};

/// Ground state of K_N + b sum (1 - Cut(|yL/N|)) per axis, tensored n times.
InitialState prepare_initial_state(const GridSpec& grid, double b, const InitialStateOptions& options = {});

/// T = constant * norm_diff^2 / (eps * gap_min^3).
double choose_total_time(double norm_diff, double gap_min, double eps, double constant = 1.0);

struct EvolveResult {
  WaveState state;
  EvolutionTrace trace;
  long steps = 0;
  double max_norm_drift = 0.0;
};

/// Strang split-step propagation under K + (1 - s) V0 + s VT with the potential
/// taken at the midpoint of each step. Throws NormDrift when |norm - 1| > 1e-6.
EvolveResult evolve(const WaveState& psi0, const PotentialSpec& p0, const PotentialSpec& pT,
                    const Schedule& schedule);
/// Same with pre-evaluated diagonals.
EvolveResult evolve(const WaveState& psi0, const std::vector<double>& v0, const std::vector<double>& vT,
                    const Schedule& schedule);

enum class MeasureMode { expectation, sample };

/// Expectation value, or an eigenvalue drawn with Born probabilities from the
/// dense eigenbasis (active dimension <= 4096).
double measure_energy(const HamiltonianOp& h, const WaveState& psi, MeasureMode mode, std::mt19937_64& rng);
double measure_energy(const HamiltonianOp& h, const WaveState& psi);

/// |<a|b>|^2 for unit states.
double overlap(const WaveState& a, const WaveState& b);

}  // namespace fga
