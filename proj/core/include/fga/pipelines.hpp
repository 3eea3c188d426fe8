#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fga/adiabatic.hpp"
#include "fga/fd_oracle.hpp"
#include "fga/polytope.hpp"
#include "fga/spectra.hpp"

namespace fga {

/// Multipliers for every asymptotic Theta/O/Omega factor; all default to 1.
/// Unknown names are rejected.
class ThetaConstants {
 public:
  ThetaConstants();
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  static const std::vector<std::string>& names();
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

/// One line of the derivation chain kept for audit.
struct AuditEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
};

inline constexpr double kParameterOverflowGuard = 1e30;
inline constexpr double kScaledNormCap = 1e6;

struct FgaParams {
  int n = 1;
  int N = 128;
  double L = 12.0;
  double r = 3.0;
  double a = 1.0;
  double b = 9.0;
  double c = 16.0;
  double E0 = 0.0;
  double sigma = 0.0;
  double eps0 = 0.1;
  ThetaConstants constants;
  /// b, c come from the potential rather than the asymptotic formulas.
  bool scaled = false;
  /// Some derived value exceeds kParameterOverflowGuard.
  bool overflow = false;
  std::vector<AuditEntry> audit;
  /// Invariants the caller chose not to enforce (e.g. r < L/2 for drums).
  std::vector<std::string> waived;
};

/// E0 = 10(n(n+3)pi^2 + a), sigma = C eps0 / (r^4 E0^1.5), b = C E0^7 / sigma^6.
/// In this unscaled form c defaults to b.
FgaParams derive_fga_params(int n, double a, double r, double L, double eps0,
                            const ThetaConstants& constants = {});

/// a, b, c read off the potential: a = max V on B_1, b = min V on |x| >= r
/// inside the box, c = max V on B_{r+1}; E0, sigma recorded for audit.
FgaParams scaled_fga_params(const PotentialSpec& V, const GridSpec& grid, double r, double eps0,
                            const ThetaConstants& constants = {});

/// Throws InvalidArgument naming the first violated invariant.
void validate_fga_params(const FgaParams& p);

struct InclusionCheck {
  std::string name;
  bool pass = true;
  /// Most violating sampled value (signed slack, negative means violated).
  double worst_slack = 0.0;
  long samples = 0;
};

struct BowlReport {
  std::vector<InclusionCheck> inclusions;
  bool convex = true;
  double worst_convexity = 0.0;
  bool pass() const;
  std::vector<std::string> violated() const;
};

/// Sampled verdict on B_1 in V_a in V_b in B_r in B_{r+1} in V_c in V_{c+1} in
/// the torus box, plus midpoint convexity on B_{r+1}.
BowlReport check_bowl_conditions(const PotentialSpec& V, const FgaParams& params, long samples,
                                 std::uint64_t seed = 1);

struct FgaOptions {
  /// Skip the bowl-condition gate (scaled-parameter mode).
  bool bypass_bowl = false;
  long bowl_samples = 2000;
  /// Target distance in the adiabatic runtime rule.
  double adiabatic_eps = 0.1;
  /// Multiplies the chosen total time (T-sweeps).
  double time_scale = 1.0;
  /// Fixed total time; 0 uses the adiabatic runtime rule.
  double total_time = 0.0;
  MeasureMode measure = MeasureMode::expectation;
  bool sampling_init = false;
  std::uint64_t seed = 1;
  long trace_stride = 0;
  /// Refuse schedules longer than this many split steps.
  long max_steps = 20'000'000;
  bool trace_overlaps = true;
  std::vector<double> s_points{0.0, 0.25, 0.5, 0.75, 1.0};
};

struct FgaResult {
  double lambda0_estimate = 0.0;
  /// Spectrum of H_Q(T) by direct diagonalization.
  SpectralReport final_report;
  double final_overlap = 0.0;
  EvolutionTrace trace;
  InitialState init;
  std::vector<double> s_points;
  std::vector<double> path_lambda0;
  std::vector<double> path_lambda1;
  std::vector<double> path_gaps;
  double min_gap = 0.0;
  /// 3 pi^2 / (2(r+1))^2
  double gap_bound = 0.0;
  /// lambda1 of the Dirichlet box of half-width 1/(2 sqrt n) plus max V_s on it.
  std::vector<double> lambda1_bounds;
  double total_time = 0.0;
  long steps = 0;
  /// max |V_T - V_0| over the grid (the exact norm of the diagonal difference).
  double norm_diff = 0.0;
  /// r^6 (N^2 + c + n b)^2 upper bound on the squared difference.
  double norm_diff_bound = 0.0;
  double max_norm_drift = 0.0;
  BowlReport bowl;
};

/// Prepare, evolve from V_Q(0) = b sum(1 - Cut) to V_Q(T) = Sat_{c,1} o V, measure.
FgaResult run_fga(const PotentialSpec& V, const FgaParams& params, const GridSpec& grid,
                  const FgaOptions& options = {});

struct DrumParams {
  FgaParams fga;
  double E = 0.0;
  double mu = 0.0;
  double eps = 0.0;
  /// 3E / mu^6 with its constant.
  double strength = 0.0;
  /// n^32 R^24 / eps0^6, the closed form of b.
  double b_closed_form = 0.0;
  int m = 0;
  PotentialPtr barrier;
};

/// Full parameter chain for a drum already satisfying b_j >= 1.
DrumParams derive_drum_params(const DrumInstance& drum, const ThetaConstants& constants = {});

enum class DrumMode { direct, fga };

struct DrumOptions {
  int N = 128;
  /// Double N until lambda0 moves less than eps0/4 (up to max_N).
  bool auto_N = false;
  int max_N = 512;
  double norm_cap = kScaledNormCap;
  double sweep_start = 1e2;
  double sweep_factor = 10.0;
  /// Relative change between the last two sweep points counted as stable.
  double stabilize_tol = 1e-3;
  double solver_tol = 1e-3;
  bool masked_check = true;
  bool fd_check = true;
  int fd_resolution = 512;
  ThetaConstants constants;
  FgaOptions fga;
};

struct DrumResult {
  double lambda0_estimate = 0.0;  // original coordinates
  double lambda0_normalized = 0.0;
  NormalizedDrum normalized;
  DrumParams params;
  int N = 0;
  double L = 0.0;
  std::vector<double> sweep_strengths;
  std::vector<double> sweep_lambda0;  // original coordinates
  bool stabilized = false;
  bool sweep_monotone = true;
  double strength_cap = 0.0;
  std::optional<double> masked_lambda0;  // original coordinates
  bool bracket_ok = true;
  std::optional<FdOracleResult> oracle;
  std::vector<int> resolutions;
  std::vector<double> resolution_lambda0;
  std::optional<FgaResult> fga;
};

DrumResult solve_drum(const DrumInstance& drum, DrumMode mode, const DrumOptions& options = {});

}  // namespace fga
