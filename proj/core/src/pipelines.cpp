#include "fga/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fga/error.hpp"

namespace fga {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<double> random_direction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> d(static_cast<std::size_t>(n));
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& v : d) {
      v = g(rng);
      s += v * v;
    }
  } while (s < 1e-20);
  s = std::sqrt(s);
  for (auto& v : d) v /= s;
  return d;
}

// Points on the sphere of radius rad: both ends of every axis, then random directions.
std::vector<std::vector<double>> sphere_points(int n, double rad, long count, std::mt19937_64& rng) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < n; ++i)
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> x(static_cast<std::size_t>(n), 0.0);
      x[static_cast<std::size_t>(i)] = sgn * rad;
      out.push_back(std::move(x));
    }
  if (n > 1)
    for (long k = 0; k < count; ++k) {
      auto d = random_direction(n, rng);
      for (auto& v : d) v *= rad;
      out.push_back(std::move(d));
    }
  return out;
}

std::vector<double> uniform_in_ball(int n, double rad, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto d = random_direction(n, rng);
  const double scale = rad * std::pow(u(rng), 1.0 / n);
  for (auto& v : d) v *= scale;
  return d;
}

void add_audit(FgaParams& p, std::string name, double value, std::string formula) {
  p.audit.push_back({std::move(name), value, std::move(formula)});
}

double e0_formula(int n, double a) { return 10.0 * (n * (n + 3) * kPi2 + a); }

}  // namespace

ThetaConstants::ThetaConstants() {
  for (const auto& n : names()) values_[n] = 1.0;
}

const std::vector<std::string>& ThetaConstants::names() {
  static const std::vector<std::string> k{"E_constant",    "mu_constant",       "eps_constant",
                                          "sigma_constant", "b_constant",       "c_constant",
                                          "strength_constant", "time_constant"};
  return k;
}

double ThetaConstants::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw InvalidArgument("unknown asymptotic constant '" + name + "'");
  return it->second;
}

void ThetaConstants::set(const std::string& name, double value) {
  const auto it = values_.find(name);
  if (it == values_.end()) throw InvalidArgument("unknown asymptotic constant '" + name + "'");
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("constant '" + name + "' must be finite and > 0");
  it->second = value;
}

FgaParams derive_fga_params(int n, double a, double r, double L, double eps0, const ThetaConstants& constants) {
  if (n < 1) throw InvalidArgument("derive_fga_params: n must be >= 1");
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw InvalidArgument("derive_fga_params: eps0 must lie in (0,1)");
  if (!(r >= 1.0 && r < L / 2.0)) throw InvalidArgument("derive_fga_params: r must lie in [1, L/2)");
  FgaParams p;
  p.n = n;
  p.L = L;
  p.r = r;
  p.a = a;
  p.eps0 = eps0;
  p.constants = constants;
  p.E0 = e0_formula(n, a);
  p.sigma = constants.get("sigma_constant") * eps0 / (std::pow(r, 4) * std::pow(p.E0, 1.5));
  p.b = constants.get("b_constant") * std::pow(p.E0, 7) / std::pow(p.sigma, 6);
  p.c = constants.get("c_constant") * p.b;
  p.overflow = !(p.b <= kParameterOverflowGuard) || !(p.c <= kParameterOverflowGuard);
  add_audit(p, "E0", p.E0, "10 (n (n+3) pi^2 + a)");
  add_audit(p, "sigma", p.sigma, "sigma_constant * eps0 / (r^4 E0^1.5)");
  add_audit(p, "b", p.b, "b_constant * E0^7 / sigma^6");
  add_audit(p, "c", p.c, "c_constant * b");
  validate_fga_params(p);
  return p;
}

FgaParams scaled_fga_params(const PotentialSpec& V, const GridSpec& grid, double r, double eps0,
                            const ThetaConstants& constants) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw InvalidArgument("scaled_fga_params: eps0 must lie in (0,1)");
  const auto values = eval_potential(V, grid);
  std::mt19937_64 rng(0x5ca1ed);
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  double c = 0.0;
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t i = 0; i < values.size(); ++i) {
    grid.position(i, x);
    const double d = norm_of(x);
    if (d <= 1.0) a = std::max(a, values[i]);
    if (d >= r) b = std::min(b, values[i]);
    if (d <= r + 1.0) c = std::max(c, values[i]);
  }
  const double half = grid.L / 2.0;
  auto in_box = [&](const std::vector<double>& y) {
    return std::all_of(y.begin(), y.end(), [&](double v) { return std::abs(v) <= half; });
  };
  for (const auto& y : sphere_points(grid.n, 1.0, 2000, rng)) a = std::max(a, evaluate(V, y));
  for (const auto& y : sphere_points(grid.n, r, 2000, rng))
    if (in_box(y)) b = std::min(b, evaluate(V, y));
  for (const auto& y : sphere_points(grid.n, r + 1.0, 2000, rng)) c = std::max(c, evaluate(V, y));
  if (!std::isfinite(b)) throw InvalidArgument("scaled_fga_params: no sample with |x| >= r inside the box");

  FgaParams p;
  p.n = grid.n;
  p.N = grid.N;
  p.L = grid.L;
  p.r = r;
  p.a = a;
  p.b = b;
  p.c = c;
  p.eps0 = eps0;
  p.scaled = true;
  p.constants = constants;
  p.E0 = e0_formula(grid.n, a);
  p.sigma = constants.get("sigma_constant") * eps0 / (std::pow(r, 4) * std::pow(p.E0, 1.5));
  add_audit(p, "a", a, "max V over B_1");
  add_audit(p, "b", b, "min V over |x| >= r inside the box");
  add_audit(p, "c", c, "max V over B_{r+1}");
  add_audit(p, "E0", p.E0, "10 (n (n+3) pi^2 + a)");
  add_audit(p, "sigma", p.sigma, "sigma_constant * eps0 / (r^4 E0^1.5)");
  add_audit(p, "b_unscaled", constants.get("b_constant") * std::pow(p.E0, 7) / std::pow(p.sigma, 6),
            "b_constant * E0^7 / sigma^6 (not used in scaled mode)");
  return p;
}

void validate_fga_params(const FgaParams& p) {
  auto waived = [&](const std::string& what) {
    return std::find(p.waived.begin(), p.waived.end(), what) != p.waived.end();
  };
  if (p.n < 1) throw InvalidArgument("FgaParams: n must be >= 1");
  if (!(p.eps0 > 0.0 && p.eps0 < 1.0)) throw InvalidArgument("FgaParams: eps0 must lie in (0,1)");
  if (!(p.r > 1.0 || (p.r == 1.0))) throw InvalidArgument("FgaParams: r must be >= 1");
  if (!(p.E0 > 1.0)) throw InvalidArgument("FgaParams: E0 must exceed 1");
  if (!(p.c > 1.0)) throw InvalidArgument("FgaParams: c must exceed 1");
  if (!(p.a <= p.b) && !waived("a<=b")) throw InvalidArgument("FgaParams: a <= b violated");
  if (!(p.b <= p.c) && !waived("b<=c")) throw InvalidArgument("FgaParams: b <= c violated");
  if (!(p.r < p.L / 2.0) && !waived("r<L/2")) throw InvalidArgument("FgaParams: r < L/2 violated");
}

bool BowlReport::pass() const {
  return convex && std::all_of(inclusions.begin(), inclusions.end(), [](const auto& c) { return c.pass; });
}

std::vector<std::string> BowlReport::violated() const {
  std::vector<std::string> out;
  for (const auto& c : inclusions)
    if (!c.pass) out.push_back(c.name);
  if (!convex) out.push_back("convexity on B_{r+1}");
  return out;
}

BowlReport check_bowl_conditions(const PotentialSpec& V, const FgaParams& p, long samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("check_bowl_conditions: samples must be >= 1");
  std::mt19937_64 rng(seed);
  const int n = p.n;
  const double half = p.L / 2.0;
  const double tol = 1e-9 * std::max({1.0, std::abs(p.b), std::abs(p.c)});
  BowlReport rep;

  auto check = [&](std::string name, const std::vector<std::vector<double>>& pts, auto slack) {
    InclusionCheck c;
    c.name = std::move(name);
    c.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) {
      c.worst_slack = std::min(c.worst_slack, slack(x));
      ++c.samples;
    }
    if (c.samples == 0) c.worst_slack = 0.0;
    c.pass = c.worst_slack >= -tol;
    rep.inclusions.push_back(c);
  };
  auto order = [&](std::string name, double slack) {
    InclusionCheck c{std::move(name), slack >= -tol, slack, 1};
    rep.inclusions.push_back(c);
  };

  // B_1 in V^{-1}_a
  auto pts = sphere_points(n, 1.0, samples, rng);
  for (long k = 0; k < samples; ++k) pts.push_back(uniform_in_ball(n, 1.0, rng));
  check("B_1 in V^-1_a", pts, [&](const auto& x) { return p.a - evaluate(V, x); });

  order("V^-1_a in V^-1_b", p.b - p.a);

  // V^{-1}_b in B_r: every sampled point of the box outside B_r has V >= b
  pts.clear();
  std::uniform_real_distribution<double> box(-half, half);
  for (const auto& x : sphere_points(n, p.r, samples, rng))
    if (std::all_of(x.begin(), x.end(), [&](double v) { return std::abs(v) <= half; })) pts.push_back(x);
  for (long k = 0; k < 4 * samples; ++k) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = box(rng);
    if (norm_of(x) >= p.r) pts.push_back(std::move(x));
  }
  check("V^-1_b in B_r", pts, [&](const auto& x) { return evaluate(V, x) - p.b; });

  order("B_r in B_{r+1}", 1.0);

  // B_{r+1} in V^{-1}_c
  pts = sphere_points(n, p.r + 1.0, samples, rng);
  for (long k = 0; k < samples; ++k) pts.push_back(uniform_in_ball(n, p.r + 1.0, rng));
  check("B_{r+1} in V^-1_c", pts, [&](const auto& x) { return p.c - evaluate(V, x); });

  order("V^-1_c in V^-1_{c+1}", 1.0);

  // V^{-1}_{c+1} in the box: V > c + 1 on the box boundary (a convex sublevel set
  // containing the origin then stays inside)
  pts.clear();
  for (long k = 0; k < samples; ++k) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = box(rng);
    const auto face = static_cast<std::size_t>(k % n);
    x[face] = (k / n) % 2 == 0 ? half : -half;
    pts.push_back(std::move(x));
  }
  check("V^-1_{c+1} in B^inf_{L/2}", pts, [&](const auto& x) { return evaluate(V, x) - (p.c + 1.0); });

  // midpoint convexity on B_{r+1}
  double worst = 0.0;
  for (long k = 0; k < samples; ++k) {
    const auto x = uniform_in_ball(n, p.r + 1.0, rng);
    const auto y = uniform_in_ball(n, p.r + 1.0, rng);
    std::vector<double> mid(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);
    const double fx = evaluate(V, x);
    const double fy = evaluate(V, y);
    const double excess = evaluate(V, mid) - 0.5 * (fx + fy);
    worst = std::max(worst, excess - 1e-9 * std::max({1.0, std::abs(fx), std::abs(fy)}));
  }
  rep.worst_convexity = worst;
  rep.convex = worst <= 0.0;
  return rep;
}

FgaResult run_fga(const PotentialSpec& V, const FgaParams& params, const GridSpec& grid, const FgaOptions& options) {
  if (params.n != grid.n) throw GridMismatch("run_fga: parameter dimension does not match the grid");
  if (!params.scaled && params.overflow)
    throw ParameterOverflow("run_fga: unscaled parameters exceed the 1e30 guard; use scaled mode");
  FgaResult out;
  if (!options.bypass_bowl) {
    out.bowl = check_bowl_conditions(V, params, options.bowl_samples, options.seed);
    if (!out.bowl.pass()) {
      std::string what = "run_fga: bowl conditions violated:";
      for (const auto& v : out.bowl.violated()) what += " [" + v + "]";
      throw InvalidArgument(what);
    }
  }

  const auto p0 = initial_cut(grid.n, params.b);
  const auto pT = saturated(make_potential(V.value), params.c, 1.0);
  const auto v0 = eval_potential(*p0, grid);
  const auto vT = eval_potential(*pT, grid);
  const HamiltonianOp h0(grid, v0);

  // spot spectral solves along the path
  const double w = 1.0 / (2.0 * std::sqrt(static_cast<double>(grid.n)));
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  out.gap_bound = 3.0 * kPi2 / std::pow(2.0 * (params.r + 1.0), 2);
  out.min_gap = std::numeric_limits<double>::infinity();
  for (double s : options.s_points) {
    std::vector<double> v(v0.size());
    double vmax_box = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = (1.0 - s) * v0[i] + s * vT[i];
      grid.position(i, x);
      if (std::all_of(x.begin(), x.end(), [&](double c) { return std::abs(c) <= w; }))
        vmax_box = std::max(vmax_box, v[i]);
    }
    const SpectralReport rep = solve_spectrum(h0.with_potential(std::move(v)), 2, 1e-8);
    if (rep.degenerate) throw DegenerateSpectrum("run_fga: gap collapses along the path at s=" + std::to_string(s));
    out.s_points.push_back(s);
    out.path_lambda0.push_back(rep.lambda0);
    out.path_lambda1.push_back(rep.lambda1);
    out.path_gaps.push_back(rep.gap);
    out.lambda1_bounds.push_back(kPi2 * grid.n * (grid.n + 3) + vmax_box);
    out.min_gap = std::min(out.min_gap, rep.gap);
  }

  for (std::size_t i = 0; i < v0.size(); ++i) out.norm_diff = std::max(out.norm_diff, std::abs(vT[i] - v0[i]));
  out.norm_diff_bound =
      std::pow(params.r, 6) * std::pow(static_cast<double>(grid.N) * grid.N + params.c + grid.n * params.b, 2);
  out.total_time = options.total_time > 0.0
                       ? options.total_time
                       : choose_total_time(out.norm_diff, out.min_gap, options.adiabatic_eps,
                                           params.constants.get("time_constant"));
  out.total_time *= options.time_scale;

  InitialStateOptions io;
  io.sampling = options.sampling_init;
  io.seed = options.seed;
  out.init = prepare_initial_state(grid, params.b, io);

  const HamiltonianOp hT = h0.with_potential(vT);
  Schedule sched = make_schedule(out.total_time, h0.kinetic_max() + std::max(h0.potential_max(), hT.potential_max()));
  if (sched.steps > options.max_steps)
    throw InvalidArgument("run_fga: schedule needs " + std::to_string(sched.steps) + " steps (T = " +
                          std::to_string(out.total_time) + "), above the max_steps budget " +
                          std::to_string(options.max_steps) + "; set total_time or lower the norm");
  sched.trace_stride = options.trace_stride;
  sched.trace_overlaps = options.trace_overlaps;
  EvolveResult ev = evolve(out.init.state, v0, vT, sched);
  out.steps = ev.steps;
  out.max_norm_drift = ev.max_norm_drift;
  out.trace = std::move(ev.trace);

  SolveOptions so;
  so.how_many = 2;
  so.tol = 1e-8;
  out.final_report = solve_spectrum(hT, so);
  out.final_overlap = overlap(ev.state, out.final_report.ground);
  std::mt19937_64 rng(options.seed);
  out.lambda0_estimate = measure_energy(hT, ev.state, options.measure, rng);
  return out;
}

DrumParams derive_drum_params(const DrumInstance& drum, const ThetaConstants& constants) {
  const int n = drum.dimension();
  if (n < 1) throw InvalidArgument("derive_drum_params: empty drum");
  for (const auto& p : drum.planes)
    if (p.b < 1.0 - 1e-12) throw InvalidArgument("derive_drum_params: b_j >= 1 required (normalize the drum first)");
  if (!(drum.R >= 1.0)) throw InvalidArgument("derive_drum_params: R must be >= 1");
  const double R = drum.R;
  const double eps0 = drum.eps0;
  const int m = static_cast<int>(drum.planes.size());

  DrumParams d;
  d.m = m;
  d.E = constants.get("E_constant") * n * n;
  d.mu = constants.get("mu_constant") * eps0 / (std::pow(n, 5) * std::cbrt(static_cast<double>(m)) * std::pow(R, 23.0 / 6.0));
  d.eps = constants.get("eps_constant") * eps0 / (n * n);
  d.strength = constants.get("strength_constant") * 3.0 * d.E / std::pow(d.mu, 6);
  d.b_closed_form = std::pow(n, 32) * std::pow(R, 24) / std::pow(eps0, 6);

  FgaParams& p = d.fga;
  p.n = n;
  p.L = 3.0 * R;
  p.r = 2.0 * R;
  p.a = 0.0;
  p.eps0 = eps0;
  p.constants = constants;
  p.E0 = e0_formula(n, 0.0);
  p.sigma = constants.get("sigma_constant") * eps0 / (std::pow(p.r, 4) * std::pow(p.E0, 1.5));
  p.b = constants.get("b_constant") * std::pow(p.E0, 7) / std::pow(p.sigma, 6);
  p.c = constants.get("c_constant") * d.E * p.L * m * std::sqrt(static_cast<double>(n)) / std::pow(d.mu, 6);
  p.overflow = !(p.b <= kParameterOverflowGuard) || !(p.c <= kParameterOverflowGuard);
  // r = 2R and L = 3R cannot satisfy r < L/2; the ordering b <= c also fails at these magnitudes
  p.waived = {"r<L/2", "b<=c"};

  add_audit(p, "E", d.E, "E_constant * n^2");
  add_audit(p, "mu", d.mu, "mu_constant * eps0 / (n^5 m^(1/3) R^(23/6))");
  add_audit(p, "eps", d.eps, "eps_constant * eps0 / n^2");
  add_audit(p, "strength", d.strength, "strength_constant * 3 E / mu^6");
  add_audit(p, "L", p.L, "3 R");
  add_audit(p, "r", p.r, "2 R");
  add_audit(p, "a", p.a, "0");
  add_audit(p, "E0", p.E0, "10 (n (n+3) pi^2 + a)");
  add_audit(p, "sigma", p.sigma, "sigma_constant * eps0 / (r^4 E0^1.5)");
  add_audit(p, "b", p.b, "b_constant * E0^7 / sigma^6");
  add_audit(p, "b_closed_form", d.b_closed_form, "n^32 R^24 / eps0^6");
  add_audit(p, "c", p.c, "c_constant * E L m sqrt(n) / mu^6");
  validate_fga_params(p);

  d.barrier = barrier_sum(drum.planes, d.strength, d.eps);
  return d;
}

namespace {

struct SweepOutcome {
  std::vector<double> strengths;
  std::vector<double> lambda0;
  double cap = 0.0;
  bool stabilized = false;
  WaveState ground;
};

SweepOutcome barrier_sweep(const DrumInstance& nd, const DrumParams& params, const GridSpec& grid,
                           const DrumOptions& o) {
  const auto unit = eval_potential(*barrier_sum(nd.planes, 1.0, params.eps), grid);
  const double umax = *std::max_element(unit.begin(), unit.end());
  const HamiltonianOp base(grid, std::vector<double>(grid.size(), 0.0));
  const double room = o.norm_cap - base.kinetic_max();
  if (!(room > 0.0)) throw InvalidArgument("solve_drum: kinetic norm alone exceeds the norm cap");

  SweepOutcome out;
  out.cap = std::min(params.strength, umax > 0.0 ? room / umax : params.strength);
  std::vector<double> strengths;
  for (double s = std::min(o.sweep_start, out.cap); s < out.cap * (1.0 - 1e-9); s *= o.sweep_factor)
    strengths.push_back(s);
  strengths.push_back(out.cap);

  std::vector<cplx> start;
  for (double s : strengths) {
    std::vector<double> v(unit.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * unit[i];
    SolveOptions so;
    so.tol = o.solver_tol;
    so.start = start;
    const SpectralReport rep = solve_spectrum(base.with_potential(std::move(v)), so);
    start = rep.ground.amplitudes();
    out.strengths.push_back(s);
    out.lambda0.push_back(rep.lambda0);
    out.ground = rep.ground;
    const std::size_t k = out.lambda0.size();
    if (k >= 2 && std::abs(out.lambda0[k - 1] - out.lambda0[k - 2]) <= o.stabilize_tol * std::abs(out.lambda0[k - 1])) {
      out.stabilized = true;
      break;
    }
  }
  return out;
}

}  // namespace

DrumResult solve_drum(const DrumInstance& drum, DrumMode mode, const DrumOptions& o) {
  DrumResult out;
  out.normalized = normalize_drum(drum);
  const DrumInstance& nd = out.normalized.drum;
  const double R = std::max(1.0, nd.R);
  DrumInstance scaled_drum = nd;
  scaled_drum.R = R;
  out.params = derive_drum_params(scaled_drum, o.constants);
  out.L = out.params.fga.L;

  if (mode == DrumMode::direct) {
    std::vector<int> Ns{o.N};
    if (o.auto_N)
      for (int N = 2 * o.N; N <= o.max_N; N *= 2) Ns.push_back(N);
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int N : Ns) {
      const GridSpec grid = build_grid(nd.dimension(), N, out.L);
      SweepOutcome sw = barrier_sweep(nd, out.params, grid, o);
      const double lam = sw.lambda0.back();
      out.resolutions.push_back(N);
      out.resolution_lambda0.push_back(out.normalized.to_original(lam));
      out.N = N;
      out.lambda0_normalized = lam;
      out.stabilized = sw.stabilized;
      out.strength_cap = sw.cap;
      out.sweep_strengths = sw.strengths;
      out.sweep_lambda0.clear();
      for (double l : sw.lambda0) out.sweep_lambda0.push_back(out.normalized.to_original(l));
      out.sweep_monotone = true;
      for (std::size_t k = 1; k < sw.lambda0.size(); ++k)
        if (sw.lambda0[k] < sw.lambda0[k - 1] - o.solver_tol) out.sweep_monotone = false;
      if (!std::isnan(previous) && std::abs(lam - previous) < nd.eps0 / 4.0) break;
      previous = lam;
    }
    out.lambda0_estimate = out.normalized.to_original(out.lambda0_normalized);

    if (o.masked_check) {
      const GridSpec grid = build_grid(nd.dimension(), out.N, out.L);
      const HamiltonianOp free_op(grid, std::vector<double>(grid.size(), 0.0));
      const HamiltonianOp masked = dirichlet_restrict(free_op, RestrictionMask{PolytopeMask{nd.planes}, grid});
      SolveOptions so;
      so.tol = 1e-6;
      const SpectralReport rep = solve_spectrum(masked, so);
      out.masked_lambda0 = out.normalized.to_original(rep.lambda0);
      out.bracket_ok = out.lambda0_normalized <= rep.lambda0 + o.solver_tol;
    }
  } else {
    const GridSpec grid = build_grid(nd.dimension(), o.N, out.L);
    const auto unit = eval_potential(*barrier_sum(nd.planes, 1.0, out.params.eps), grid);
    const double umax = *std::max_element(unit.begin(), unit.end());
    const HamiltonianOp base(grid, std::vector<double>(grid.size(), 0.0));
    // leave room for b on every axis and the saturation level c
    const double room = o.norm_cap - base.kinetic_max();
    const double strength = std::min(out.params.strength, room / (2.0 * std::max(umax, 1e-300)));
    out.strength_cap = strength;
    const auto V = barrier_sum(nd.planes, strength, out.params.eps);
    FgaParams fp = scaled_fga_params(*V, grid, out.params.fga.r, nd.eps0, o.constants);
    fp.waived = out.params.fga.waived;
    fp.b = std::min(fp.b, room / (2.0 * grid.n));
    fp.c = std::min(std::max(fp.c, fp.b), room / 2.0);
    FgaOptions fo = o.fga;
    fo.bypass_bowl = true;
    out.fga = run_fga(*V, fp, grid, fo);
    out.N = o.N;
    out.lambda0_normalized = out.fga->lambda0_estimate;
    out.lambda0_estimate = out.normalized.to_original(out.lambda0_normalized);
  }

  if (o.fd_check && drum.dimension() == 2) out.oracle = fd_oracle(drum.planes, o.fd_resolution);
  return out;
}

}  // namespace fga
