#include "fga/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fga/eigensolvers.hpp"
#include "fga/error.hpp"
#include "fga/fft.hpp"

namespace fga {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void fix_phase(WaveState& psi) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double a = std::abs(psi[i]);
    if (a > best * (1.0 + 1e-12)) {
      best = a;
      arg = i;
    }
  }
  if (best <= 0.0) return;
  const cplx phase = std::conj(psi[arg]) / best;
  for (auto& a : psi.amplitudes()) a *= phase;
  psi[arg] = cplx(psi[arg].real(), 0.0);
}

void finish(SpectralReport& r) {
  r.lambda0 = r.eigenvalues.at(0);
  r.lambda1 = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : r.lambda0;
  const double gap = r.lambda1 - r.lambda0;
  r.degenerate = gap < kDegenerateGap;
  r.gap = r.degenerate ? 0.0 : gap;
}

}  // namespace

std::string to_string(SolverMethod m) { return m == SolverMethod::dense ? "dense" : "lanczos"; }

double eigen_residual(const HamiltonianOp& h, const WaveState& psi, double lambda) {
  const WaveState hpsi = apply_hamiltonian(h, psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (h.is_active(i)) s += std::norm(hpsi[i] - lambda * psi[i]);
  return std::sqrt(s);
}

SpectralReport solve_spectrum(const HamiltonianOp& h, const SolveOptions& options) {
  if (options.how_many < 2) throw InvalidArgument("solve_spectrum: how_many must be >= 2");
  if (!(options.tol > 0.0)) throw InvalidArgument("solve_spectrum: tol must be > 0");
  if (static_cast<std::size_t>(options.how_many) > h.dimension())
    throw InvalidArgument("solve_spectrum: how_many exceeds the operator dimension");

  SpectralReport r;
  const auto& grid = h.grid();
  std::vector<WaveState> states;
  std::vector<double> residuals;

  if (h.dimension() <= options.dense_limit) {
    const auto idx = h.active_indices();
    const DenseEigen eig = dense_eigen(h, options.how_many);
    r.method = SolverMethod::dense;
    r.iterations = 1;
    for (int i = 0; i < options.how_many; ++i) {
      WaveState psi(grid);
      for (std::size_t p = 0; p < idx.size(); ++p) psi[idx[p]] = eig.vectors(static_cast<Eigen::Index>(p), i);
      psi.normalize();
      r.eigenvalues.push_back(eig.values(i));
      residuals.push_back(eigen_residual(h, psi, eig.values(i)));
      states.push_back(std::move(psi));
    }
  } else {
    LanczosOptions lo;
    lo.how_many = options.how_many;
    lo.tol = options.tol;
    lo.krylov = options.krylov;
    lo.seed = options.seed;
    lo.start = options.start;
    LanczosResult res = lanczos_lowest(h, lo);
    r.method = SolverMethod::lanczos;
    r.iterations = res.iterations;
    r.eigenvalues = res.values;
    residuals = res.residuals;
    for (auto& v : res.vectors) states.emplace_back(grid, std::move(v));
  }

  finish(r);
  r.residual0 = residuals.at(0);
  r.residual1 = residuals.size() > 1 ? residuals[1] : residuals[0];
  r.ground = states.at(0);
  fix_phase(r.ground);
  if (options.keep_states) {
    for (auto& s : states) fix_phase(s);
    r.states = std::move(states);
  }
  return r;
}

SpectralReport solve_spectrum(const HamiltonianOp& h, int how_many, double tol) {
  SolveOptions o;
  o.how_many = how_many;
  o.tol = tol;
  return solve_spectrum(h, o);
}

std::vector<std::uint8_t> mask_indicator(const RestrictionMask& mask) {
  const GridSpec& grid = mask.grid;
  std::vector<std::uint8_t> out(grid.size(), 0);
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  std::visit(
      Overloaded{
          [&](const BallMask& b) {
            if (!(b.radius > 0.0)) throw InvalidArgument("BallMask: radius must be > 0");
            if (!b.center.empty() && b.center.size() != x.size())
              throw InvalidArgument("BallMask: center dimension mismatch");
            for (std::size_t i = 0; i < out.size(); ++i) {
              grid.position(i, x);
              double d = 0.0;
              for (std::size_t a = 0; a < x.size(); ++a) {
                const double c = x[a] - (b.center.empty() ? 0.0 : b.center[a]);
                d = b.linf ? std::max(d, std::abs(c)) : d + c * c;
              }
              const double r = b.linf ? b.radius : b.radius * b.radius;
              out[i] = d < r ? 1 : 0;
            }
          },
          [&](const PolytopeMask& p) {
            if (p.planes.empty()) throw InvalidArgument("PolytopeMask: no half-planes");
            for (const auto& hp : p.planes)
              if (hp.a.size() != x.size()) throw InvalidArgument("PolytopeMask: normal dimension mismatch");
            for (std::size_t i = 0; i < out.size(); ++i) {
              grid.position(i, x);
              bool inside = true;
              for (const auto& hp : p.planes) {
                double s = 0.0;
                for (std::size_t a = 0; a < x.size(); ++a) s += hp.a[a] * x[a];
                if (!(s < hp.b)) {
                  inside = false;
                  break;
                }
              }
              out[i] = inside ? 1 : 0;
            }
          },
          [&](const FrequencyBallMask& f) {
            if (!(f.K >= 0.0)) throw InvalidArgument("FrequencyBallMask: K must be >= 0");
            for (std::size_t i = 0; i < out.size(); ++i) {
              const auto k = grid.labels(i);
              double s = 0.0;
              for (int v : k) s += static_cast<double>(v) * v;
              out[i] = s <= f.K * f.K * (1.0 + 1e-12) ? 1 : 0;
            }
          },
      },
      mask.shape);
  return out;
}

HamiltonianOp dirichlet_restrict(const HamiltonianOp& h, const RestrictionMask& mask) {
  if (!mask.is_position()) throw InvalidArgument("dirichlet_restrict: mask must be a position mask");
  require_same_grid(h.grid(), mask.grid, "dirichlet_restrict");
  const auto ind = mask_indicator(mask);
  if (std::none_of(ind.begin(), ind.end(), [](std::uint8_t v) { return v != 0; }))
    throw InvalidArgument("dirichlet_restrict: mask is empty");
  return h.restrict_to(ind);
}

WaveState frequency_project(const WaveState& psi, double K) {
  if (!(K >= 0.0)) throw InvalidArgument("frequency_project: K must be >= 0");
  auto c = fourier_coefficients(psi);
  const auto keep = mask_indicator(RestrictionMask{FrequencyBallMask{K}, psi.grid()});
  double kept = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += std::norm(c[i]);
    if (keep[i])
      kept += std::norm(c[i]);
    else
      c[i] = 0.0;
  }
  if (!(kept > 1e-28 * std::max(total, 1e-300)))
    throw InvalidArgument("frequency_project: projection annihilates the state");
  WaveState out = from_fourier_coefficients(psi.grid(), c);
  out.normalize();
  return out;
}

GapCheck check_gap_bound(const SpectralReport& report, double diameter) {
  if (!(diameter > 0.0)) throw InvalidArgument("check_gap_bound: diameter must be > 0");
  GapCheck g;
  g.bound = 3.0 * std::numbers::pi * std::numbers::pi / (diameter * diameter);
  g.margin = report.gap - g.bound;
  g.pass = !report.degenerate && g.margin >= -1e-6 * report.gap;
  return g;
}

}  // namespace fga
