#pragma once
// Numerical probes for the spectral lemmas the algorithm relies on, and the
// suites that run them over fixed and randomized instance families.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fga/adiabatic.hpp"
#include "fga/potential.hpp"
#include "fga/spectra.hpp"

namespace fga {

/// Flat record written by every probe. `pass` means the probe behaved as the
/// instance expects, so a negative control passes when it detects the failure.
struct ProbeRecord {
  std::string probe;
  std::string instance;
  std::string expectation = "holds";
  std::map<std::string, double> inputs;
  std::map<std::string, double> measured;
  std::map<std::string, double> bound;
  std::vector<std::string> notes;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<ProbeRecord> records;
  bool pass() const;
  std::size_t failures() const;
};

// ---- aliasing ----

struct AliasingResult {
  int K = 0;
  int N = 0;
  /// N >= 3K + 1
  bool exact_regime = false;
  double max_discrepancy = 0.0;
  std::size_t coefficients = 0;
};

/// Analytic Fourier coefficients of a trigonometric polynomial against the
/// grid Riemann sum for every |k|_inf <= 2K. N may be any integer >= 1.
AliasingResult probe_aliasing_exactness(int K, int N, const PotentialSpec& trig_poly, int n);

// ---- frequency resolution ----

struct FrequencyResult {
  std::vector<int> Ns;
  std::vector<double> lambda0;
  std::vector<double> lambda1;
  /// |lambda(N) - lambda(2N)| for consecutive pairs.
  std::vector<double> dlambda0;
  std::vector<double> dlambda1;
  /// Least-squares slope of -log dlambda0 against log N (nonzero deltas only).
  std::optional<double> fitted_order;
};

/// Spectra at each N in `Ns` (consecutive doublings) on [-L/2, L/2)^n.
FrequencyResult probe_frequency_resolution(const PotentialSpec& V, int n, double L, const std::vector<int>& Ns);

// ---- position truncation ----

struct TruncationResult {
  double lambda0_torus = 0.0;
  double lambda1_torus = 0.0;
  double lambda0_ball = 0.0;
  double lambda1_ball = 0.0;
  double dlambda0 = 0.0;
  double dlambda1 = 0.0;
  double dgap = 0.0;
  /// Weight of the torus ground state on |x| >= r.
  double tail_weight = 0.0;
  /// lambda0 / b_level
  double tail_bound = 0.0;
  /// Smallest potential value on grid points with |x| >= r.
  double min_outside = 0.0;
};

/// Torus operator against its Dirichlet restriction to the ball of radius r+1.
/// Throws InvalidArgument when V < b_level somewhere on |x| >= r.
TruncationResult probe_position_truncation(const PotentialSpec& V, const GridSpec& grid, double r, double b_level);

// ---- gap lemma ----

struct GapLemmaResult {
  bool refused = false;
  std::string refusal;
  /// Factor applied to the base potential.
  double scale = 0.0;
  double E = 0.0;
  double sigma = 0.0;
  double gap_a = 0.0;
  double gap_b = 0.0;
  double dgap = 0.0;
  /// 0.01 gap_a + solver tolerance
  double bound = 0.0;
  /// 0.01 gap_a / dgap (infinite when dgap = 0)
  double margin_factor = 0.0;
  TruncationResult pair;
  bool pass = false;
};

/// Scales V so that min_{|x|>=r} V = E / sigma^2 with sigma = sigma_constant g^2 / E^1.5,
/// E = max(E_min, 2(lambda1 + 1)), solved by fixed-point iteration, then compares
/// the gaps of the torus operator and its ball restriction.
GapLemmaResult probe_gap_lemma(const PotentialSpec& V, const GridSpec& grid, double r, double E_min = 0.0,
                               double sigma_constant = 1.0);

// ---- Weyl convexity ----

struct WeylOptions {
  int lines = 20;
  double a_step = 0.1;
  /// Modulation steps are integer multiples of 2 pi / L up to this many units.
  int b_units = 2;
  std::uint64_t seed = 7;
  double tolerance = 1e-8;
};

struct WeylResult {
  double min_second_difference = 0.0;
  /// Second difference along pure modulation divided by |db|^2 (should be 2).
  double b_curvature = 0.0;
  /// F(0, b) - F(0, 0) - |b|^2 for a lattice b.
  double b_marginal_error = 0.0;
  /// G(a) - G(0) - |a|^2 (meaningful for unit quadratic V and centered psi).
  double a_marginal_error = 0.0;
  int lines = 0;
  bool violation = false;
};

/// F(a, b) = <W psi | H | W psi> with W translating by a (Fourier phase) and
/// modulating by b (lattice wave vectors), probed by second differences along lines.
/// psi is band-limited to |k| <= N/4 first.
WeylResult probe_weyl_convexity(const PotentialSpec& V, const WaveState& psi, const WeylOptions& options = {});

// ---- fundamental gap ----

struct FundamentalGapInstance {
  std::string name;
  GridSpec grid;
  std::vector<Halfplane> domain;
  PotentialPtr potential;
  double diameter = 0.0;
};

struct FundamentalGapResult {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double relative_excess = 0.0;
  std::size_t points = 0;
  bool pass = false;
};

FundamentalGapResult probe_fundamental_gap(const FundamentalGapInstance& instance);

/// 25 random 1D intervals with node endpoints and 25 random polygons inscribed in
/// ellipses (aspect <= 2), each carrying a random convex quadratic.
std::vector<FundamentalGapInstance> fundamental_gap_family(std::uint64_t seed, int count_1d = 25, int count_2d = 25);

/// Flat potential on [-1/2, 1/2] (L = 2, N = 2048): the bound is attained.
FundamentalGapInstance flat_interval_instance(int N = 2048);

// ---- propagator order ----

struct PropagatorOrderResult {
  std::vector<long> steps;
  std::vector<double> dt;
  std::vector<double> errors;
  double fitted_order = 0.0;
  double max_norm_drift = 0.0;
};

/// Global error of the split-step propagator against a fine reference on a
/// fixed smooth 1D instance.
PropagatorOrderResult probe_propagator_order(std::vector<long> steps = {1200, 2400, 4800, 9600},
                                             long reference_steps = 153600);

// ---- suites ----

const std::vector<std::string>& suite_names();

/// One of suite_names(); "all" runs every suite in order.
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 1);

SuiteReport suite_aliasing(std::uint64_t seed);
SuiteReport suite_frequency(std::uint64_t seed);
SuiteReport suite_truncation(std::uint64_t seed);
SuiteReport suite_gap(std::uint64_t seed);
SuiteReport suite_monotonicity(std::uint64_t seed);
SuiteReport suite_weyl(std::uint64_t seed);
SuiteReport suite_smoothness(std::uint64_t seed);
SuiteReport suite_propagator(std::uint64_t seed);

}  // namespace fga
