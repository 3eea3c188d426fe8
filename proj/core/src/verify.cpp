#include "fga/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fga/error.hpp"
#include "fga/fft.hpp"
#include "fga/polytope.hpp"
#include "fga/smoothfn.hpp"

namespace fga {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSolverTol = 1e-8;

double rel_tol(double v) { return kSolverTol * std::max(1.0, std::abs(v)); }

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

SpectralReport dense_spectrum(const HamiltonianOp& h, int how_many = 2) {
  SolveOptions so;
  so.how_many = how_many;
  so.tol = kSolverTol;
  return solve_spectrum(h, so);
}

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Convex polygon with vertices at sorted random angles on a rotated ellipse.
struct RandomPolygon {
  std::vector<Halfplane> planes;
  std::vector<std::vector<double>> vertices;
};

RandomPolygon random_ellipse_polygon(std::mt19937_64& rng, double semi_major) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double A = semi_major;
  const double B = A * (0.5 + 0.5 * u(rng));
  const double rot = 2.0 * kPi * u(rng);
  const int k = 3 + static_cast<int>(u(rng) * 7.0);
  std::vector<double> angles;
  for (;;) {
    angles.clear();
    for (int i = 0; i < k; ++i) angles.push_back(2.0 * kPi * u(rng));
    std::sort(angles.begin(), angles.end());
    double widest = 2.0 * kPi - angles.back() + angles.front();
    for (int i = 1; i < k; ++i) widest = std::max(widest, angles[static_cast<std::size_t>(i)] - angles[static_cast<std::size_t>(i - 1)]);
    if (widest < 0.8 * kPi) break;
  }
  RandomPolygon out;
  for (double t : angles) {
    const double ex = A * std::cos(t);
    const double ey = B * std::sin(t);
    out.vertices.push_back({std::cos(rot) * ex - std::sin(rot) * ey, std::sin(rot) * ex + std::cos(rot) * ey});
  }
  // counter-clockwise order gives outward normals (dy, -dx)
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    const auto& p = out.vertices[i];
    const auto& q = out.vertices[(i + 1) % out.vertices.size()];
    double nx = q[1] - p[1];
    double ny = -(q[0] - p[0]);
    const double len = std::hypot(nx, ny);
    nx /= len;
    ny /= len;
    out.planes.push_back({{nx, ny}, nx * p[0] + ny * p[1]});
  }
  return out;
}

PotentialPtr random_quadratic(std::mt19937_64& rng, int n, double center_spread, double max_curvature) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(n)), k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] = center_spread * (2.0 * u(rng) - 1.0);
    k[static_cast<std::size_t>(i)] = max_curvature * u(rng);
  }
  return quadratic(std::move(c), std::move(k));
}

std::vector<std::uint8_t> polytope_mask(const std::vector<Halfplane>& planes, const GridSpec& grid) {
  return mask_indicator(RestrictionMask{PolytopeMask{planes}, grid});
}

std::size_t count_active(const std::vector<std::uint8_t>& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

SuiteReport make_report(const char* name, std::uint64_t seed) {
  SuiteReport r;
  r.suite = name;
  r.seed = seed;
  return r;
}

}  // namespace

bool SuiteReport::pass() const { return failures() == 0 && !records.empty(); }

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

AliasingResult probe_aliasing_exactness(int K, int N, const PotentialSpec& trig_poly, int n) {
  if (!trig_poly.holds<TrigPolynomial>())
    throw InvalidArgument("probe_aliasing_exactness: input is not band-limited (trigonometric polynomial required)");
  if (K < 0 || N < 1 || n < 1) throw InvalidArgument("probe_aliasing_exactness: K >= 0, N >= 1, n >= 1 required");
  const auto& tp = trig_poly.as<TrigPolynomial>();
  if (tp.max_frequency() > K) throw InvalidArgument("probe_aliasing_exactness: polynomial exceeds frequency K");
  for (const auto& t : tp.terms)
    if (static_cast<int>(t.frequency.size()) != n) throw InvalidArgument("probe_aliasing_exactness: dimension mismatch");

  // analytic coefficients keyed by frequency vector
  std::map<std::vector<int>, cplx> exact;
  exact[std::vector<int>(static_cast<std::size_t>(n), 0)] += tp.constant;
  for (const auto& t : tp.terms) {
    const bool zero = std::all_of(t.frequency.begin(), t.frequency.end(), [](int v) { return v == 0; });
    if (zero) {
      exact[t.frequency] += t.cos_coef;
      continue;
    }
    std::vector<int> neg(t.frequency);
    for (auto& v : neg) v = -v;
    exact[t.frequency] += cplx(0.5 * t.cos_coef, -0.5 * t.sin_coef);
    exact[neg] += cplx(0.5 * t.cos_coef, 0.5 * t.sin_coef);
  }

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(N);
  std::vector<double> samples(total);
  std::vector<int> y(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rest = f;
    for (int a = n - 1; a >= 0; --a) {
      y[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(N));
      rest /= static_cast<std::size_t>(N);
      x[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(a)] * tp.L / N;
    }
    samples[f] = evaluate(trig_poly, x);
  }

  AliasingResult out;
  out.K = K;
  out.N = N;
  out.exact_regime = N >= 3 * K + 1;
  const int span = 4 * K + 1;
  std::size_t kcount = 1;
  for (int i = 0; i < n; ++i) kcount *= static_cast<std::size_t>(span);
  std::vector<int> k(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < kcount; ++idx) {
    std::size_t rest = idx;
    for (int a = n - 1; a >= 0; --a) {
      k[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(span)) - 2 * K;
      rest /= static_cast<std::size_t>(span);
    }
    cplx sum = 0.0;
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t r2 = f;
      long phase = 0;
      for (int a = n - 1; a >= 0; --a) {
        phase += static_cast<long>(k[static_cast<std::size_t>(a)]) * static_cast<long>(r2 % static_cast<std::size_t>(N));
        r2 /= static_cast<std::size_t>(N);
      }
      phase %= N;
      sum += samples[f] * std::polar(1.0, -2.0 * kPi * static_cast<double>(phase) / N);
    }
    sum /= static_cast<double>(total);
    const auto it = exact.find(k);
    const cplx want = it == exact.end() ? cplx(0.0) : it->second;
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(sum - want));
    ++out.coefficients;
  }
  return out;
}

FrequencyResult probe_frequency_resolution(const PotentialSpec& V, int n, double L, const std::vector<int>& Ns) {
  if (Ns.size() < 2) throw InvalidArgument("probe_frequency_resolution: need at least two resolutions");
  for (std::size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] != 2 * Ns[i - 1]) throw InvalidArgument("probe_frequency_resolution: resolutions must double");
  FrequencyResult out;
  for (int N : Ns) {
    const GridSpec grid = build_grid(n, N, L);
    const SpectralReport rep = dense_spectrum(make_hamiltonian(V, grid));
    out.Ns.push_back(N);
    out.lambda0.push_back(rep.lambda0);
    out.lambda1.push_back(rep.lambda1);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 1; i < Ns.size(); ++i) {
    out.dlambda0.push_back(std::abs(out.lambda0[i] - out.lambda0[i - 1]));
    out.dlambda1.push_back(std::abs(out.lambda1[i] - out.lambda1[i - 1]));
    if (out.dlambda0.back() > 0.0) {
      lx.push_back(std::log(static_cast<double>(Ns[i - 1])));
      ly.push_back(-std::log(out.dlambda0.back()));
    }
  }
  if (lx.size() >= 2) out.fitted_order = fit_slope(lx, ly);
  return out;
}

TruncationResult probe_position_truncation(const PotentialSpec& V, const GridSpec& grid, double r, double b_level) {
  if (!(r > 0.0)) throw InvalidArgument("probe_position_truncation: r must be > 0");
  const auto v = eval_potential(V, grid);
  TruncationResult out;
  out.min_outside = std::numeric_limits<double>::infinity();
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  std::vector<std::uint8_t> outside(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    grid.position(i, x);
    if (norm_of(x) >= r) {
      outside[i] = 1;
      out.min_outside = std::min(out.min_outside, v[i]);
    }
  }
  if (out.min_outside < b_level * (1.0 - 1e-12))
    throw InvalidArgument("probe_position_truncation: V drops below b_level outside radius r");

  const HamiltonianOp torus(grid, v);
  const HamiltonianOp ball = dirichlet_restrict(torus, RestrictionMask{BallMask{r + 1.0, false, {}}, grid});
  const SpectralReport a = dense_spectrum(torus);
  const SpectralReport b = dense_spectrum(ball);
  out.lambda0_torus = a.lambda0;
  out.lambda1_torus = a.lambda1;
  out.lambda0_ball = b.lambda0;
  out.lambda1_ball = b.lambda1;
  out.dlambda0 = std::abs(a.lambda0 - b.lambda0);
  out.dlambda1 = std::abs(a.lambda1 - b.lambda1);
  out.dgap = std::abs((a.lambda1 - a.lambda0) - (b.lambda1 - b.lambda0));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (outside[i]) out.tail_weight += std::norm(a.ground[i]);
  out.tail_bound = std::isfinite(out.min_outside) && b_level > 0.0 ? a.lambda0 / b_level
                                                                   : std::numeric_limits<double>::infinity();
  return out;
}

GapLemmaResult probe_gap_lemma(const PotentialSpec& V, const GridSpec& grid, double r, double E_min,
                               double sigma_constant) {
  GapLemmaResult out;
  const auto base = eval_potential(V, grid);
  double min_out = std::numeric_limits<double>::infinity();
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t i = 0; i < base.size(); ++i) {
    grid.position(i, x);
    if (norm_of(x) >= r) min_out = std::min(min_out, base[i]);
  }
  if (!std::isfinite(min_out) || !(min_out > 0.0)) {
    out.refused = true;
    out.refusal = "potential does not grow outside radius r, so no scaling reaches E/sigma^2";
    return out;
  }

  auto scaled = [&](double s) {
    std::vector<double> v(base);
    for (auto& e : v) e *= s;
    return v;
  };
  double s = 1.0;
  for (int it = 0; it < 200; ++it) {
    const SpectralReport rep = dense_spectrum(HamiltonianOp(grid, scaled(s)));
    if (rep.degenerate || !(rep.gap > 0.0)) {
      out.refused = true;
      out.refusal = "gap(h_a) is zero";
      return out;
    }
    const double E = std::max({E_min, 2.0 * (rep.lambda1 + 1.0), 1.0 + 1e-12});
    const double sigma = sigma_constant * rep.gap * rep.gap / std::pow(E, 1.5);
    const double next = E / (sigma * sigma) / min_out;
    out.E = E;
    out.sigma = sigma;
    if (std::abs(next - s) <= 1e-10 * s) {
      s = next;
      break;
    }
    s = std::sqrt(s * next);
  }
  out.scale = s;
  const auto pot = tabulated(grid, scaled(s));
  out.pair = probe_position_truncation(*pot, grid, r, s * min_out);
  out.gap_a = out.pair.lambda1_torus - out.pair.lambda0_torus;
  out.gap_b = out.pair.lambda1_ball - out.pair.lambda0_ball;
  if (!(out.gap_a > kDegenerateGap)) {
    out.refused = true;
    out.refusal = "gap(h_a) is zero";
    return out;
  }
  if (2.0 * (out.pair.lambda1_torus + 1.0) > out.E * (1.0 + 1e-9)) {
    out.refused = true;
    out.refusal = "2(lambda1 + 1) <= E fails";
    return out;
  }
  out.dgap = std::abs(out.gap_a - out.gap_b);
  out.bound = 0.01 * out.gap_a + rel_tol(out.pair.lambda1_torus);
  out.margin_factor = out.dgap > 0.0 ? 0.01 * out.gap_a / out.dgap : std::numeric_limits<double>::infinity();
  out.pass = out.dgap <= out.bound;
  return out;
}

WeylResult probe_weyl_convexity(const PotentialSpec& V, const WaveState& psi, const WeylOptions& o) {
  const GridSpec& grid = psi.grid();
  const int n = grid.n;
  if (o.lines < 2) throw InvalidArgument("probe_weyl_convexity: at least two lines required");
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw InvalidArgument("probe_weyl_convexity: psi must be normalized");
  const HamiltonianOp h = make_hamiltonian(V, grid);
  const double band = grid.N / 4.0;
  const WaveState smooth = frequency_project(psi, band);
  const std::vector<cplx> coef = fourier_coefficients(smooth);

  const int half = grid.N / 2;
  auto F = [&](std::span<const double> a, std::span<const int> m) {
    std::vector<cplx> shifted(coef.size(), cplx(0.0));
    std::vector<int> dst(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < coef.size(); ++i) {
      const auto k = grid.labels(i);
      double k2 = 0.0;
      for (int kv : k) k2 += static_cast<double>(kv) * kv;
      // the round trip through position space leaves rounding noise outside the band
      if (k2 > band * band) continue;
      double phase = 0.0;
      for (int d = 0; d < n; ++d) {
        const auto du = static_cast<std::size_t>(d);
        phase -= 2.0 * kPi * k[du] * a[du] / grid.L;
        dst[du] = k[du] + m[du];
        if (dst[du] < -half || dst[du] >= half) throw InvalidArgument("probe_weyl_convexity: modulation leaves the band");
      }
      shifted[grid.flat_index(dst)] = coef[i] * std::polar(1.0, phase);
    }
    return energy(h, from_fourier_coefficients(grid, shifted));
  };

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ub(-o.b_units, o.b_units);
  WeylResult out;
  out.min_second_difference = std::numeric_limits<double>::infinity();
  const auto nz = static_cast<std::size_t>(n);
  for (int line = 0; line < o.lines; ++line) {
    std::vector<double> a0(nz, 0.0), da(nz, 0.0);
    std::vector<int> m0(nz, 0), dm(nz, 0);
    if (line == 0) {
      da[0] = o.a_step;  // pure translation through the origin
    } else if (line == 1) {
      dm[0] = 1;  // pure modulation
    } else {
      for (std::size_t d = 0; d < nz; ++d) {
        a0[d] = 0.5 * u(rng);
        da[d] = o.a_step * u(rng);
        m0[d] = ub(rng);
        dm[d] = ub(rng);
      }
    }
    double vals[3];
    for (int j = -1; j <= 1; ++j) {
      std::vector<double> a(nz);
      std::vector<int> m(nz);
      for (std::size_t d = 0; d < nz; ++d) {
        a[d] = a0[d] + j * da[d];
        m[d] = m0[d] + j * dm[d];
      }
      vals[j + 1] = F(a, m);
    }
    const double sd = vals[0] + vals[2] - 2.0 * vals[1];
    out.min_second_difference = std::min(out.min_second_difference, sd);
    if (line == 1) out.b_curvature = sd / std::pow(2.0 * kPi / grid.L, 2);
    ++out.lines;
  }

  const std::vector<double> zero_a(nz, 0.0);
  const std::vector<int> zero_m(nz, 0);
  std::vector<int> m1(nz, 0);
  m1[0] = 1;
  const double b2 = std::pow(2.0 * kPi / grid.L, 2);
  out.b_marginal_error = F(zero_a, m1) - F(zero_a, zero_m) - b2;
  std::vector<double> a1(nz, 0.0);
  a1[0] = 0.3;
  out.a_marginal_error = F(a1, zero_m) - F(zero_a, zero_m) - 0.09;
  out.violation = out.min_second_difference < -o.tolerance;
  return out;
}

FundamentalGapResult probe_fundamental_gap(const FundamentalGapInstance& inst) {
  const HamiltonianOp h = make_hamiltonian(*inst.potential, inst.grid);
  const auto mask = polytope_mask(inst.domain, inst.grid);
  FundamentalGapResult out;
  out.points = count_active(mask);
  if (out.points < 2) throw InvalidArgument("probe_fundamental_gap: domain contains fewer than two grid points");
  const SpectralReport rep = dense_spectrum(h.restrict_to(mask));
  const GapCheck gc = check_gap_bound(rep, inst.diameter);
  out.lambda0 = rep.lambda0;
  out.lambda1 = rep.lambda1;
  out.gap = rep.gap;
  out.bound = gc.bound;
  out.relative_excess = gc.margin / gc.bound;
  out.pass = gc.pass;
  return out;
}

std::vector<FundamentalGapInstance> fundamental_gap_family(std::uint64_t seed, int count_1d, int count_2d) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FundamentalGapInstance> out;
  const GridSpec g1 = build_grid(1, 256, 4.0);
  const double h1 = g1.spacing();
  for (int i = 0; i < count_1d; ++i) {
    // endpoints on grid nodes so the strict mask covers the open interval exactly
    const int lo = -16 - static_cast<int>(u(rng) * 100.0);
    const int hi = 16 + static_cast<int>(u(rng) * 100.0);
    FundamentalGapInstance f;
    f.name = "interval-" + std::to_string(i);
    f.grid = g1;
    f.domain = {{{1.0}, hi * h1}, {{-1.0}, -lo * h1}};
    f.diameter = (hi - lo) * h1;
    const double center = (lo + u(rng) * (hi - lo)) * h1;
    f.potential = quadratic({center}, {50.0 * u(rng) / (f.diameter * f.diameter)});
    out.push_back(std::move(f));
  }
  const GridSpec g2 = build_grid(2, 64, 3.0);
  for (int i = 0; i < count_2d; ++i) {
    const RandomPolygon poly = random_ellipse_polygon(rng, 1.0);
    FundamentalGapInstance f;
    f.name = "polygon-" + std::to_string(i);
    f.grid = g2;
    f.domain = poly.planes;
    f.diameter = polytope_diameter(poly.planes);
    f.potential = random_quadratic(rng, 2, 0.4, 20.0);
    out.push_back(std::move(f));
  }
  return out;
}

FundamentalGapInstance flat_interval_instance(int N) {
  FundamentalGapInstance f;
  f.name = "flat-interval";
  f.grid = build_grid(1, N, 2.0);
  f.domain = {{{1.0}, 0.5}, {{-1.0}, 0.5}};
  f.diameter = 1.0;
  f.potential = constant_potential(0.0);
  return f;
}

PropagatorOrderResult probe_propagator_order(std::vector<long> steps, long reference_steps) {
  if (steps.size() < 2) throw InvalidArgument("probe_propagator_order: need at least two step counts");
  const GridSpec grid = build_grid(1, 32, 12.0);
  const auto v0 = eval_potential(*isotropic_quadratic(1), grid);
  const auto vT = eval_potential(*quadratic({0.5}, {1.0}), grid);
  const SpectralReport start = dense_spectrum(HamiltonianOp(grid, v0));
  const double T = 1.0;

  auto run = [&](long count) {
    Schedule s;
    s.total_time = T;
    s.steps = count;
    s.trace_stride = count;
    s.trace_overlaps = false;
    return evolve(start.ground, v0, vT, s);
  };
  PropagatorOrderResult out;
  const EvolveResult ref = run(reference_steps);
  out.max_norm_drift = ref.max_norm_drift;
  std::vector<double> lx, ly;
  for (long count : steps) {
    const EvolveResult r = run(count);
    double err = 0.0;
    for (std::size_t i = 0; i < r.state.size(); ++i) err += std::norm(r.state[i] - ref.state[i]);
    err = std::sqrt(err);
    out.steps.push_back(count);
    out.dt.push_back(T / static_cast<double>(count));
    out.errors.push_back(err);
    out.max_norm_drift = std::max(out.max_norm_drift, r.max_norm_drift);
    lx.push_back(std::log(out.dt.back()));
    ly.push_back(std::log(err));
  }
  out.fitted_order = fit_slope(lx, ly);
  return out;
}

// ---------------------------------------------------------------- suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> k{"aliasing", "frequency", "truncation", "gap",       "monotonicity",
                                          "weyl",     "smoothness", "propagator", "all"};
  return k;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "aliasing") return suite_aliasing(seed);
  if (name == "frequency") return suite_frequency(seed);
  if (name == "truncation") return suite_truncation(seed);
  if (name == "gap") return suite_gap(seed);
  if (name == "monotonicity") return suite_monotonicity(seed);
  if (name == "weyl") return suite_weyl(seed);
  if (name == "smoothness") return suite_smoothness(seed);
  if (name == "propagator") return suite_propagator(seed);
  if (name == "all") {
    SuiteReport all = make_report("all", seed);
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto part = run_suite(s, seed);
      for (auto& r : part.records) all.records.push_back(std::move(r));
    }
    return all;
  }
  throw InvalidArgument("unknown verify suite '" + name + "'");
}

SuiteReport suite_aliasing(std::uint64_t seed) {
  SuiteReport rep = make_report("aliasing", seed);
  auto record = [&](std::string instance, int n, int K, int N, const PotentialSpec& p) {
    const AliasingResult a = probe_aliasing_exactness(K, N, p, n);
    ProbeRecord r;
    r.probe = "aliasing_exactness";
    r.instance = std::move(instance);
    r.inputs = {{"n", n}, {"K", K}, {"N", N}};
    r.measured = {{"max_discrepancy", a.max_discrepancy}, {"coefficients", static_cast<double>(a.coefficients)}};
    if (a.exact_regime) {
      r.bound = {{"max_discrepancy", 1e-12}};
      r.pass = a.max_discrepancy <= 1e-12;
    } else {
      r.expectation = "negative-control";
      r.bound = {{"min_discrepancy", 1e-6}};
      r.pass = a.max_discrepancy > 1e-6;
      r.notes.push_back("N < 3K+1: aliasing expected");
    }
    rep.records.push_back(std::move(r));
  };

  const double L = 12.0;
  const auto cos1 = trig_polynomial(L, 0.0, {{{1}, 1.0, 0.0}});
  record("cos-1d", 1, 1, 4, *cos1);
  record("cos-1d-undersampled", 1, 1, 2, *cos1);
  // cos(2 pi x / L) cos(4 pi y / L) expanded into two modes
  const auto prod = trig_polynomial(L, 0.0, {{{1, 2}, 0.5, 0.0}, {{1, -2}, 0.5, 0.0}});
  record("cos-product-2d", 2, 2, 8, *prod);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    const int n = i % 3 == 2 ? 2 : 1;
    const int K = 1 + i % (n == 1 ? 5 : 3);
    std::vector<TrigTerm> terms;
    const int count = n == 1 ? K : 2 * K;
    for (int t = 0; t < count; ++t) {
      std::vector<int> f(static_cast<std::size_t>(n));
      for (auto& v : f) v = static_cast<int>(std::lround(u(rng) * K));
      f[0] = t % 2 == 0 ? K : f[0];
      terms.push_back({f, u(rng), u(rng)});
    }
    const auto p = trig_polynomial(L, 2.0 + u(rng), terms);
    const int K_actual = p->as<TrigPolynomial>().max_frequency();
    const std::string name = "random-" + std::to_string(n) + "d-" + std::to_string(i);
    record(name + "-N3K1", n, K_actual, 3 * K_actual + 1, *p);
    int pow2 = 4;
    while (pow2 < 3 * K_actual + 1) pow2 *= 2;
    record(name + "-pow2", n, K_actual, pow2, *p);
    if (K_actual >= 2) record(name + "-under", n, K_actual, 2 * K_actual, *p);
  }

  ProbeRecord neg;
  neg.probe = "aliasing_exactness";
  neg.instance = "quadratic-not-band-limited";
  neg.expectation = "refuses";
  try {
    probe_aliasing_exactness(2, 8, *isotropic_quadratic(1), 1);
    neg.pass = false;
  } catch (const InvalidArgument& e) {
    neg.pass = true;
    neg.notes.push_back(e.what());
  }
  rep.records.push_back(std::move(neg));
  return rep;
}

SuiteReport suite_frequency(std::uint64_t seed) {
  SuiteReport rep = make_report("frequency", seed);
  const double L = 12.0;
  auto base = [&](const std::string& inst, const FrequencyResult& f) {
    ProbeRecord r;
    r.probe = "frequency_resolution";
    r.instance = inst;
    r.inputs["L"] = L;
    for (std::size_t i = 0; i < f.Ns.size(); ++i) {
      const auto tag = std::to_string(f.Ns[i]);
      r.inputs["N" + std::to_string(i)] = f.Ns[i];
      r.measured["lambda0_N" + tag] = f.lambda0[i];
      r.measured["lambda1_N" + tag] = f.lambda1[i];
    }
    for (std::size_t i = 0; i < f.dlambda0.size(); ++i) {
      r.measured["dlambda0_" + std::to_string(f.Ns[i])] = f.dlambda0[i];
      r.measured["dlambda1_" + std::to_string(f.Ns[i])] = f.dlambda1[i];
    }
    if (f.fitted_order) r.measured["fitted_order"] = *f.fitted_order;
    r.notes.push_back("the 2N spectrum stands in for the torus operator");
    return r;
  };

  {
    const auto V = trig_polynomial(L, 1.0, {{{1}, 1.0, 0.0}});
    const auto f = probe_frequency_resolution(*V, 1, L, {32, 64});
    ProbeRecord r = base("one-plus-cos", f);
    r.bound = {{"dlambda0", 1e-6}};
    r.pass = f.dlambda0[0] < 1e-6;
    rep.records.push_back(std::move(r));
  }
  {
    // steep enough that the N = 32 grid under-resolves the ground state
    const auto V = saturated(isotropic_quadratic(1, 256.0), 16.0 * 256.0, 1.0);
    const auto f = probe_frequency_resolution(*V, 1, L, {32, 64, 128, 256});
    ProbeRecord r = base("saturated-quadratic", f);
    r.expectation = "monotone";
    bool mono = true;
    for (std::size_t i = 1; i < f.dlambda0.size(); ++i) mono = mono && f.dlambda0[i] < f.dlambda0[i - 1];
    r.measured["monotone"] = mono ? 1.0 : 0.0;
    r.pass = mono;
    rep.records.push_back(std::move(r));
  }
  {
    const auto V = constant_potential(3.0);
    const auto f = probe_frequency_resolution(*V, 1, L, {32, 64, 128});
    ProbeRecord r = base("constant", f);
    const double tol = 1e-12 * 3.0;
    r.bound = {{"dlambda0", tol}};
    r.pass = std::all_of(f.dlambda0.begin(), f.dlambda0.end(), [&](double d) { return d <= tol; });
    r.notes.push_back("exact up to floating-point rounding of the dense solve");
    rep.records.push_back(std::move(r));
  }
  return rep;
}

namespace {

ProbeRecord truncation_record(const std::string& inst, double r_, double b_level, const TruncationResult& t) {
  ProbeRecord r;
  r.probe = "position_truncation";
  r.instance = inst;
  r.inputs = {{"r", r_}, {"b_level", b_level}};
  r.measured = {{"lambda0_torus", t.lambda0_torus}, {"lambda1_torus", t.lambda1_torus},
                {"lambda0_ball", t.lambda0_ball},   {"lambda1_ball", t.lambda1_ball},
                {"dlambda0", t.dlambda0},           {"dlambda1", t.dlambda1},
                {"dgap", t.dgap},                   {"tail_weight", t.tail_weight},
                {"min_outside", t.min_outside}};
  r.bound = {{"tail_weight", t.tail_bound}};
  r.pass = t.tail_weight <= t.tail_bound + 1e-12;
  return r;
}

}  // namespace

SuiteReport suite_truncation(std::uint64_t seed) {
  SuiteReport rep = make_report("truncation", seed);
  const double r = 3.0;
  const GridSpec grid = build_grid(1, 256, 12.0);
  auto bowl = [&](double level) { return isotropic_quadratic(1, level / (r * r)); };

  {
    const auto t = probe_position_truncation(*bowl(1e4), grid, r, 1e4);
    ProbeRecord rec = truncation_record("bowl-1e4", r, 1e4, t);
    rec.bound["dlambda0"] = 1e-3;
    rec.pass = rec.pass && t.dlambda0 <= 1e-3;
    rep.records.push_back(std::move(rec));
  }

  std::vector<double> deltas;
  for (double level : {0.1, 1.0, 10.0}) {
    const auto t = probe_position_truncation(*bowl(level), grid, r, level);
    deltas.push_back(t.dlambda0);
    rep.records.push_back(truncation_record("bowl-level-" + std::to_string(level), r, level, t));
  }
  ProbeRecord trend;
  trend.probe = "position_truncation";
  trend.instance = "bowl-level-trend";
  trend.expectation = "monotone";
  trend.inputs = {{"levels", 3}};
  for (std::size_t i = 0; i < deltas.size(); ++i) trend.measured["dlambda0_" + std::to_string(i)] = deltas[i];
  trend.pass = deltas[1] < deltas[0] && deltas[2] < deltas[1];
  rep.records.push_back(std::move(trend));

  {
    // torus doubling at fixed spacing as the unbounded-space proxy
    const auto V = isotropic_quadratic(1);
    const SpectralReport a = dense_spectrum(make_hamiltonian(*V, build_grid(1, 128, 12.0)));
    const SpectralReport b = dense_spectrum(make_hamiltonian(*V, build_grid(1, 256, 24.0)));
    ProbeRecord rec;
    rec.probe = "torus_doubling";
    rec.instance = "harmonic";
    rec.inputs = {{"L", 12.0}, {"N", 128}};
    rec.measured = {{"lambda0_L", a.lambda0}, {"lambda0_2L", b.lambda0}, {"dlambda0", std::abs(a.lambda0 - b.lambda0)},
                    {"lambda1_L", a.lambda1}, {"lambda1_2L", b.lambda1}, {"dlambda1", std::abs(a.lambda1 - b.lambda1)}};
    rec.bound = {{"dlambda0", 1e-6}};
    rec.pass = std::abs(a.lambda0 - b.lambda0) <= 1e-6;
    rec.notes.push_back("L -> 2L at fixed spacing replaces the comparison with unbounded space");
    rep.records.push_back(std::move(rec));
  }

  ProbeRecord neg;
  neg.probe = "position_truncation";
  neg.instance = "level-above-potential";
  neg.expectation = "refuses";
  try {
    probe_position_truncation(*isotropic_quadratic(1), grid, r, 100.0);
    neg.pass = false;
  } catch (const InvalidArgument& e) {
    neg.pass = true;
    neg.notes.push_back(e.what());
  }
  rep.records.push_back(std::move(neg));
  return rep;
}

SuiteReport suite_gap(std::uint64_t seed) {
  SuiteReport rep = make_report("gap", seed);
  auto fg_record = [&](const FundamentalGapInstance& inst, const FundamentalGapResult& res) {
    ProbeRecord r;
    r.probe = "fundamental_gap";
    r.instance = inst.name;
    r.inputs = {{"n", inst.grid.n}, {"N", inst.grid.N}, {"L", inst.grid.L}, {"diameter", inst.diameter},
                {"points", static_cast<double>(res.points)}};
    r.measured = {{"lambda0", res.lambda0}, {"lambda1", res.lambda1}, {"gap", res.gap},
                  {"relative_excess", res.relative_excess}};
    r.bound = {{"gap", res.bound}};
    r.pass = res.pass;
    return r;
  };
  for (const auto& inst : fundamental_gap_family(seed)) rep.records.push_back(fg_record(inst, probe_fundamental_gap(inst)));

  {
    const auto inst = flat_interval_instance();
    const auto res = probe_fundamental_gap(inst);
    ProbeRecord r = fg_record(inst, res);
    r.expectation = "equality";
    r.bound["relative_excess"] = 1e-3;
    r.pass = res.pass && std::abs(res.relative_excess) <= 1e-3;
    rep.records.push_back(std::move(r));
  }

  auto lemma_record = [&](const std::string& inst, double sigma_c, const GapLemmaResult& g) {
    ProbeRecord r;
    r.probe = "gap_lemma";
    r.instance = inst;
    r.inputs = {{"sigma_constant", sigma_c}};
    r.measured = {{"scale", g.scale},
                  {"E", g.E},
                  {"sigma", g.sigma},
                  {"gap_a", g.gap_a},
                  {"gap_b", g.gap_b},
                  {"dgap", g.dgap},
                  {"margin_factor", std::isfinite(g.margin_factor) ? g.margin_factor : 1e300},
                  {"lambda0_a", g.pair.lambda0_torus},
                  {"lambda1_a", g.pair.lambda1_torus},
                  {"lambda0_b", g.pair.lambda0_ball},
                  {"lambda1_b", g.pair.lambda1_ball}};
    r.bound = {{"dgap", g.bound}};
    if (g.refused) r.notes.push_back(g.refusal);
    return r;
  };

  const GridSpec grid = build_grid(1, 128, 12.0);
  const auto bowl = isotropic_quadratic(1);
  {
    const auto g = probe_gap_lemma(*bowl, grid, 3.0);
    ProbeRecord r = lemma_record("bowl-1d", 1.0, g);
    r.bound["margin_factor"] = 5.0;
    r.pass = !g.refused && g.pass && g.margin_factor >= 5.0;
    rep.records.push_back(std::move(r));
  }
  {
    // looser sigma constants keep the deltas above rounding so the trend is visible
    std::vector<double> deltas;
    for (double c : {1000.0, 100.0, 10.0}) {
      const auto g = probe_gap_lemma(*bowl, grid, 3.0, 0.0, c);
      deltas.push_back(g.refused ? std::numeric_limits<double>::quiet_NaN() : g.dgap);
      ProbeRecord r = lemma_record("bowl-1d-sigma-" + std::to_string(c), c, g);
      r.expectation = "reported";
      r.pass = !g.refused;
      rep.records.push_back(std::move(r));
    }
    ProbeRecord trend;
    trend.probe = "gap_lemma";
    trend.instance = "bowl-1d-sigma-trend";
    trend.expectation = "monotone";
    for (std::size_t i = 0; i < deltas.size(); ++i) trend.measured["dgap_" + std::to_string(i)] = deltas[i];
    trend.pass = deltas[1] < deltas[0] && deltas[2] < deltas[1];
    rep.records.push_back(std::move(trend));
  }
  {
    const auto g = probe_gap_lemma(*constant_potential(0.0), grid, 3.0);
    ProbeRecord r = lemma_record("flat-torus", 1.0, g);
    r.expectation = "refuses";
    r.pass = g.refused;
    rep.records.push_back(std::move(r));
  }
  return rep;
}

SuiteReport suite_monotonicity(std::uint64_t seed) {
  SuiteReport rep = make_report("monotonicity", seed);
  std::mt19937_64 rng(seed ^ 0x6d6f6e6fULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec g1 = build_grid(1, 128, 8.0);
  const GridSpec g2 = build_grid(2, 32, 6.0);
  const auto disk = mask_indicator(RestrictionMask{BallMask{2.5, false, {}}, g2});

  auto compare = [&](ProbeRecord& r, const SpectralReport& hi, const SpectralReport& lo) {
    r.measured = {{"lambda0_upper", hi.lambda0}, {"lambda1_upper", hi.lambda1},
                  {"lambda0_lower", lo.lambda0}, {"lambda1_lower", lo.lambda1}};
    r.bound = {{"tolerance", kSolverTol}};
    r.pass = hi.lambda0 >= lo.lambda0 - rel_tol(lo.lambda0) && hi.lambda1 >= lo.lambda1 - rel_tol(lo.lambda1);
  };

  for (int i = 0; i < 30; ++i) {
    const bool two_d = i % 2 == 1;
    const GridSpec& g = two_d ? g2 : g1;
    const auto v2 = eval_potential(*random_quadratic(rng, g.n, 1.0, 4.0), g);
    std::vector<double> extra;
    switch (i % 3) {
      case 0: extra.assign(v2.size(), 3.0 * u(rng)); break;
      case 1: extra = eval_potential(*random_quadratic(rng, g.n, 2.0, 2.0), g); break;
      default: extra = eval_potential(*saturated(random_quadratic(rng, g.n, 1.0, 4.0), 5.0 * u(rng) + 1.0), g); break;
    }
    std::vector<double> v1(v2);
    for (std::size_t k = 0; k < v1.size(); ++k) v1[k] += extra[k];
    HamiltonianOp h1(g, v1), h2(g, v2);
    if (two_d) {
      h1 = h1.restrict_to(disk);
      h2 = h2.restrict_to(disk);
    }
    ProbeRecord r;
    r.probe = "potential_comparison";
    r.instance = "pair-" + std::to_string(i);
    r.inputs = {{"n", g.n}, {"N", g.N}, {"L", g.L}};
    compare(r, dense_spectrum(h1), dense_spectrum(h2));
    rep.records.push_back(std::move(r));
  }

  const GridSpec gd = build_grid(2, 32, 3.0);
  for (int i = 0; i < 30; ++i) {
    const bool two_d = i % 2 == 1;
    const GridSpec& g = two_d ? gd : g1;
    std::vector<Halfplane> outer, inner;
    if (two_d) {
      const RandomPolygon poly = random_ellipse_polygon(rng, 1.3);
      outer = poly.planes;
      // cut by a line through a random interior point of the outer polygon
      const auto& va = poly.vertices[0];
      const auto& vb = poly.vertices[poly.vertices.size() / 2];
      const double t = 0.3 + 0.4 * u(rng);
      const double px = (1 - t) * va[0] + t * vb[0];
      const double py = (1 - t) * va[1] + t * vb[1];
      const double th = 2.0 * kPi * u(rng);
      inner = outer;
      inner.push_back({{std::cos(th), std::sin(th)}, std::cos(th) * px + std::sin(th) * py});
    } else {
      const double lo = -3.5 + 2.5 * u(rng);
      const double hi = 1.0 + 2.5 * u(rng);
      outer = {{{1.0}, hi}, {{-1.0}, -lo}};
      const double ilo = lo + 0.4 * (hi - lo) * u(rng);
      const double ihi = hi - 0.4 * (hi - lo) * u(rng);
      inner = {{{1.0}, ihi}, {{-1.0}, -ilo}};
    }
    const auto V = random_quadratic(rng, g.n, 1.0, 4.0);
    const HamiltonianOp h = make_hamiltonian(*V, g);
    const auto m_out = polytope_mask(outer, g);
    const auto m_in = polytope_mask(inner, g);
    ProbeRecord r;
    r.probe = "domain_monotonicity";
    r.instance = "nested-" + std::to_string(i);
    r.inputs = {{"n", g.n}, {"N", g.N}, {"L", g.L}, {"outer_points", static_cast<double>(count_active(m_out))},
                {"inner_points", static_cast<double>(count_active(m_in))}};
    if (count_active(m_in) < 2) {
      r.notes.push_back("inner domain too small; skipped");
      r.pass = false;
    } else {
      compare(r, dense_spectrum(h.restrict_to(m_in)), dense_spectrum(h.restrict_to(m_out)));
    }
    rep.records.push_back(std::move(r));
  }

  {
    const NormalizedDrum nd = normalize_drum(make_drum(box_planes(2, 0.0, 1.0)));
    const GridSpec g = build_grid(2, 32, 3.0 * nd.circumradius);
    ProbeRecord r;
    r.probe = "barrier_monotonicity";
    r.instance = "unit-square";
    r.expectation = "monotone";
    bool ok = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (double s : {1e1, 1e2, 1e3, 1e4}) {
      const SpectralReport rep_s = dense_spectrum(make_hamiltonian(*barrier_sum(nd.drum.planes, s, 0.025), g));
      r.measured["lambda0_S" + std::to_string(static_cast<long>(s))] = rep_s.lambda0;
      ok = ok && rep_s.lambda0 >= prev - rel_tol(prev);
      prev = rep_s.lambda0;
    }
    r.pass = ok;
    rep.records.push_back(std::move(r));
  }
  return rep;
}

SuiteReport suite_weyl(std::uint64_t seed) {
  SuiteReport rep = make_report("weyl", seed);
  auto gaussian = [](const GridSpec& g, double width, double shift) {
    WaveState psi(g);
    std::vector<double> x(static_cast<std::size_t>(g.n));
    for (std::size_t i = 0; i < psi.size(); ++i) {
      g.position(i, x);
      double r2 = 0.0;
      for (double c : x) r2 += (c - shift) * (c - shift);
      psi[i] = std::exp(-r2 / (2.0 * width * width));
    }
    psi.normalize();
    return psi;
  };
  auto record = [&](const std::string& inst, const WeylResult& w, bool convex_case) {
    ProbeRecord r;
    r.probe = "weyl_convexity";
    r.instance = inst;
    r.inputs = {{"lines", w.lines}};
    r.measured = {{"min_second_difference", w.min_second_difference},
                  {"b_curvature", w.b_curvature},
                  {"b_marginal_error", w.b_marginal_error},
                  {"a_marginal_error", w.a_marginal_error}};
    if (convex_case) {
      r.bound = {{"min_second_difference", -1e-8}, {"b_curvature_error", 1e-6}, {"b_marginal_error", 1e-6},
                 {"a_marginal_error", 1e-6}};
      r.pass = !w.violation && std::abs(w.b_curvature - 2.0) <= 1e-6 && std::abs(w.b_marginal_error) <= 1e-6 &&
               std::abs(w.a_marginal_error) <= 1e-6;
    } else {
      r.expectation = "negative-control";
      r.bound = {{"min_second_difference", -1e-8}};
      r.pass = w.violation;
    }
    return r;
  };

  WeylOptions o;
  o.seed = seed;
  {
    const GridSpec g = build_grid(1, 128, 16.0);
    const auto psi = gaussian(g, std::sqrt(0.5), 0.0);
    rep.records.push_back(record("harmonic-1d", probe_weyl_convexity(*isotropic_quadratic(1), psi, o), true));
  }
  {
    const GridSpec g = build_grid(2, 64, 16.0);
    const auto psi = gaussian(g, std::sqrt(0.5), 0.0);
    rep.records.push_back(record("harmonic-2d", probe_weyl_convexity(*isotropic_quadratic(2), psi, o), true));
  }
  {
    const GridSpec g = build_grid(1, 256, 8.0);
    std::vector<double> v(g.size());
    std::vector<double> x(1);
    for (std::size_t i = 0; i < v.size(); ++i) {
      g.position(i, x);
      v[i] = std::pow(x[0] * x[0] - 1.0, 2);
    }
    const auto psi = gaussian(g, 0.2, 0.0);
    WeylOptions oc = o;
    oc.b_units = 1;
    rep.records.push_back(record("double-well", probe_weyl_convexity(*tabulated(g, v), psi, oc), false));
  }
  return rep;
}

SuiteReport suite_smoothness(std::uint64_t seed) {
  SuiteReport rep = make_report("smoothness", seed);
  for (int m = 1; m <= 8; ++m) {
    // dense scan then golden-section refinement around the largest sample
    const int samples = 20001;
    double best_x = 0.5, best = 0.0;
    for (int i = 1; i < samples - 1; ++i) {
      const double x = static_cast<double>(i) / (samples - 1);
      const double v = std::abs(bump_derivative(x, m));
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    double lo = std::max(1e-9, best_x - 1.0 / (samples - 1));
    double hi = std::min(1.0 - 1e-9, best_x + 1.0 / (samples - 1));
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
      const double a = hi - phi * (hi - lo);
      const double b = lo + phi * (hi - lo);
      if (std::abs(bump_derivative(a, m)) > std::abs(bump_derivative(b, m)))
        hi = b;
      else
        lo = a;
    }
    best = std::max(best, std::abs(bump_derivative(0.5 * (lo + hi), m)));
    ProbeRecord r;
    r.probe = "bump_derivative_bound";
    r.instance = "order-" + std::to_string(m);
    r.inputs = {{"m", m}};
    r.measured = {{"max_abs_derivative", best}, {"argmax", 0.5 * (lo + hi)}};
    r.bound = {{"max_abs_derivative", bump_derivative_bound(m)}};
    r.pass = best <= bump_derivative_bound(m);
    rep.records.push_back(std::move(r));
  }
  {
    const auto p2 = BumpDerivPoly::of_order(2);
    const std::vector<std::int64_t> want{0, 0, 0, -2, 1};
    ProbeRecord r;
    r.probe = "derivative_recursion";
    r.instance = "p2";
    r.inputs = {{"order", 2}};
    for (std::size_t i = 0; i < p2.coefficients().size(); ++i)
      r.measured["coef_t" + std::to_string(i)] = static_cast<double>(p2.coefficients()[i]);
    r.pass = p2.coefficients() == want;
    rep.records.push_back(std::move(r));
  }
  return rep;
}

SuiteReport suite_propagator(std::uint64_t seed) {
  SuiteReport rep = make_report("propagator", seed);
  const auto res = probe_propagator_order();
  ProbeRecord r;
  r.probe = "propagator_order";
  r.instance = "harmonic-shift-1d";
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    r.inputs["steps_" + std::to_string(i)] = static_cast<double>(res.steps[i]);
    r.measured["error_" + std::to_string(i)] = res.errors[i];
  }
  r.measured["fitted_order"] = res.fitted_order;
  r.measured["max_norm_drift"] = res.max_norm_drift;
  r.bound = {{"order_min", 1.8}, {"order_max", 2.2}, {"max_norm_drift", 1e-8}};
  r.pass = res.fitted_order >= 1.8 && res.fitted_order <= 2.2 && res.max_norm_drift <= 1e-8;
  rep.records.push_back(std::move(r));
  return rep;
}

}  // namespace fga
