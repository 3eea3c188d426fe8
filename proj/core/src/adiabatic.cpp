#include "fga/adiabatic.hpp"

#include <algorithm>
#include <cmath>

#include "fga/eigensolvers.hpp"
#include "fga/error.hpp"
#include "fga/fft.hpp"
#include "fga/spectra.hpp"

namespace fga {
namespace {

constexpr double kStabilityFactor = 0.1;
constexpr double kMaxNormDrift = 1e-6;

std::vector<double> axis_initial_potential(const GridSpec& grid, double b) {
  const GridSpec axis{1, grid.N, grid.L};
  return eval_potential(*initial_cut(grid.n, b), axis);
}

}  // namespace

long stable_step_count(double total_time, double norm_estimate) {
  if (!(total_time > 0.0)) throw InvalidArgument("stable_step_count: total time must be > 0");
  const double cap = kStabilityFactor / std::max(norm_estimate, 1e-300);
  const double steps = std::ceil(total_time / cap * (1.0 - 1e-12));
  if (!(steps < 1e18)) throw InvalidArgument("stable_step_count: step count exceeds 1e18");
  return std::max(1L, static_cast<long>(steps));
}

Schedule make_schedule(double total_time, double norm_estimate, long min_steps) {
  Schedule s;
  s.total_time = total_time;
  s.steps = std::max(min_steps, stable_step_count(total_time, norm_estimate));
  return s;
}

InitialState prepare_initial_state(const GridSpec& grid, double b, const InitialStateOptions& options) {
  if (!(b >= 0.0)) throw InvalidArgument("prepare_initial_state: b must be >= 0");
  const GridSpec axis{1, grid.N, grid.L};
  const HamiltonianOp hn(axis, axis_initial_potential(grid, b));
  const DenseEigen eig = dense_eigen(hn);

  InitialState out;
  out.lambda0_single = eig.values(0);
  out.gap_single = eig.values(1) - eig.values(0);
  out.degenerate = out.gap_single < kDegenerateGap;
  if (out.degenerate) throw DegenerateSpectrum("prepare_initial_state: H_N ground state is degenerate");

  auto column = [&](Eigen::Index j) {
    std::vector<cplx> v(static_cast<std::size_t>(grid.N));
    // fix the sign so the largest entry is positive
    Eigen::Index arg = 0;
    eig.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    const double sign = eig.vectors(arg, j) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < grid.N; ++i) v[static_cast<std::size_t>(i)] = sign * eig.vectors(i, j);
    return v;
  };

  std::vector<std::vector<cplx>> factors;
  double e = 0.0;
  if (options.sampling) {
    out.copies = options.copies > 0
                     ? options.copies
                     : static_cast<long>(std::ceil(grid.N * std::log(4.0 * grid.n)));
    std::mt19937_64 rng(options.seed);
    // a maximally mixed register measured in the H_N eigenbasis yields a uniform index
    std::uniform_int_distribution<int> pick(0, grid.N - 1);
    for (int r = 0; r < grid.n; ++r) {
      int best = grid.N;
      for (long c = 0; c < out.copies; ++c) best = std::min(best, pick(rng));
      factors.push_back(column(best));
      out.register_ground.push_back(best == 0);
      e += eig.values(best);
    }
  } else {
    for (int r = 0; r < grid.n; ++r) {
      factors.push_back(column(0));
      out.register_ground.push_back(true);
    }
    e = grid.n * out.lambda0_single;
  }
  out.state = tensor_product(grid, factors);
  out.state.normalize();
  out.energy = e;
  return out;
}

double choose_total_time(double norm_diff, double gap_min, double eps, double constant) {
  if (!(gap_min > 0.0)) throw DegenerateSpectrum("choose_total_time: minimum gap must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("choose_total_time: eps must lie in (0,1)");
  if (!(constant > 0.0)) throw InvalidArgument("choose_total_time: constant must be > 0");
  if (!(norm_diff >= 0.0)) throw InvalidArgument("choose_total_time: norm difference must be >= 0");
  return constant * norm_diff * norm_diff / (eps * gap_min * gap_min * gap_min);
}

EvolveResult evolve(const WaveState& psi0, const PotentialSpec& p0, const PotentialSpec& pT,
                    const Schedule& schedule) {
  return evolve(psi0, eval_potential(p0, psi0.grid()), eval_potential(pT, psi0.grid()), schedule);
}

EvolveResult evolve(const WaveState& psi0, const std::vector<double>& v0, const std::vector<double>& vT,
                    const Schedule& schedule) {
  const GridSpec& grid = psi0.grid();
  const std::size_t size = grid.size();
  if (v0.size() != size || vT.size() != size) throw GridMismatch("evolve: potential size does not match the grid");
  if (!(schedule.total_time > 0.0) || schedule.steps < 1) throw InvalidArgument("evolve: invalid schedule");

  const HamiltonianOp h0(grid, v0);
  const HamiltonianOp hT = h0.with_potential(vT);
  const double norm_est = h0.kinetic_max() + std::max(h0.potential_max(), hT.potential_max());
  const double dt = schedule.dt();
  if (dt > kStabilityFactor / norm_est * (1.0 + 1e-9))
    throw InvalidArgument("evolve: dt exceeds the stability cap 0.1/|H|");

  const auto plan = fft_plan(grid);
  const auto mult = kinetic_multiplier(grid);
  std::vector<cplx> kin_phase(size);
  const double inv = 1.0 / static_cast<double>(size);
  for (std::size_t q = 0; q < size; ++q) kin_phase[q] = std::polar(inv, -mult[q] * dt);

  const long stride =
      schedule.trace_stride > 0 ? schedule.trace_stride : std::max(1L, schedule.steps / 64);

  EvolveResult out;
  out.state = psi0;
  auto& amp = out.state.amplitudes();
  std::vector<double> vmid(size);
  std::vector<cplx> half(size);

  auto record = [&](long step) {
    const double t = dt * static_cast<double>(step);
    const double s = std::clamp(t / schedule.total_time, 0.0, 1.0);
    std::vector<double> v(size);
    for (std::size_t i = 0; i < size; ++i) v[i] = (1.0 - s) * v0[i] + s * vT[i];
    const HamiltonianOp ht = h0.with_potential(std::move(v));
    const double nrm = out.state.norm();
    out.trace.times.push_back(t);
    out.trace.norms.push_back(nrm);
    out.trace.energies.push_back(energy(ht, out.state));
    if (schedule.trace_overlaps) {
      const SpectralReport rep = solve_spectrum(ht, 2, 1e-8);
      out.trace.overlaps.push_back(std::min(1.0, overlap(out.state, rep.ground) / (nrm * nrm)));
    }
  };

  record(0);
  for (long step = 0; step < schedule.steps; ++step) {
    const double s = (static_cast<double>(step) + 0.5) / static_cast<double>(schedule.steps);
    for (std::size_t i = 0; i < size; ++i) {
      vmid[i] = (1.0 - s) * v0[i] + s * vT[i];
      half[i] = std::polar(1.0, -0.5 * dt * vmid[i]);
      amp[i] *= half[i];
    }
    plan->forward(amp);
    for (std::size_t q = 0; q < size; ++q) amp[q] *= kin_phase[q];
    plan->backward(amp);
    for (std::size_t i = 0; i < size; ++i) amp[i] *= half[i];

    const long done = step + 1;
    if (done % stride == 0 || done == schedule.steps) {
      const double drift = std::abs(out.state.norm() - psi0.norm());
      out.max_norm_drift = std::max(out.max_norm_drift, drift);
      if (drift > kMaxNormDrift) throw NormDrift("evolve: norm drift exceeds 1e-6", done);
      record(done);
    }
  }
  out.steps = schedule.steps;
  return out;
}

double overlap(const WaveState& a, const WaveState& b) { return std::norm(inner(a, b)); }

double measure_energy(const HamiltonianOp& h, const WaveState& psi, MeasureMode mode, std::mt19937_64& rng) {
  if (mode == MeasureMode::expectation) return energy(h, psi);
  if (h.dimension() > 4096) throw InvalidArgument("measure_energy: sample mode needs dimension <= 4096");
  const auto idx = h.active_indices();
  const DenseEigen eig = dense_eigen(h);
  std::vector<double> weights(static_cast<std::size_t>(eig.values.size()));
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    cplx c{};
    for (std::size_t p = 0; p < idx.size(); ++p) c += eig.vectors(static_cast<Eigen::Index>(p), j) * psi[idx[p]];
    weights[static_cast<std::size_t>(j)] = std::norm(c);
  }
  std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
  return eig.values(static_cast<Eigen::Index>(draw(rng)));
}

double measure_energy(const HamiltonianOp& h, const WaveState& psi) {
  std::mt19937_64 unused(0);
  return measure_energy(h, psi, MeasureMode::expectation, unused);
}

}  // namespace fga
