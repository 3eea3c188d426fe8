#include "fga/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fga/error.hpp"

namespace fga {

std::size_t GridSpec::size() const noexcept {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(N);
  return s;
}

int GridSpec::coord(int label) const noexcept {
  const int shifted = label + N / 2;
  return ((shifted % N) + N) % N;
}

std::vector<int> GridSpec::labels(std::size_t flat) const {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int a = n - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = label(static_cast<int>(flat % static_cast<std::size_t>(N)));
    flat /= static_cast<std::size_t>(N);
  }
  return out;
}

std::size_t GridSpec::flat_index(std::span<const int> lbl) const {
  if (static_cast<int>(lbl.size()) != n) throw InvalidArgument("flat_index: label arity mismatch");
  std::size_t flat = 0;
  for (int a = 0; a < n; ++a)
    flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(coord(lbl[static_cast<std::size_t>(a)]));
  return flat;
}

std::vector<double> GridSpec::position(std::size_t flat) const {
  std::vector<double> out(static_cast<std::size_t>(n));
  position(flat, out);
  return out;
}

void GridSpec::position(std::size_t flat, std::span<double> out) const {
  const double h = spacing();
  for (int a = n - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = h * label(static_cast<int>(flat % static_cast<std::size_t>(N)));
    flat /= static_cast<std::size_t>(N);
  }
}

bool is_power_of_two(long v) noexcept { return v > 0 && (v & (v - 1)) == 0; }

GridSpec build_grid(int n, int N, double L, std::size_t max_points) {
  if (n < 1) throw InvalidArgument("build_grid: dimension n must be >= 1");
  if (N < 4 || !is_power_of_two(N))
    throw InvalidArgument("build_grid: N=" + std::to_string(N) + " is not a power of two >= 4");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("build_grid: L must be finite and > 0");
  double points = 1.0;
  for (int a = 0; a < n; ++a) points *= N;
  if (points > static_cast<double>(max_points))
    throw InvalidArgument("build_grid: N^n = " + std::to_string(points) +
                          " exceeds the grid budget of " + std::to_string(max_points) + " points");
  return GridSpec{n, N, L};
}

std::vector<int> axis_labels(const GridSpec& grid) {
  std::vector<int> out(static_cast<std::size_t>(grid.N));
  for (int c = 0; c < grid.N; ++c) out[static_cast<std::size_t>(c)] = grid.label(c);
  return out;
}

std::vector<double> axis_positions(const GridSpec& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.N));
  for (int c = 0; c < grid.N; ++c) out[static_cast<std::size_t>(c)] = grid.label(c) * grid.spacing();
  return out;
}

WaveState::WaveState(GridSpec grid) : grid_(grid), amplitudes_(grid.size(), cplx{}) {}

WaveState::WaveState(GridSpec grid, std::vector<cplx> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size())
    throw InvalidArgument("WaveState: amplitude count does not match the grid");
}

double WaveState::norm() const { return std::sqrt(norm2(amplitudes_)); }

WaveState& WaveState::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("WaveState::normalize: zero or non-finite state");
  for (auto& a : amplitudes_) a /= nrm;
  return *this;
}

WaveState WaveState::basis(const GridSpec& grid, std::span<const int> labels) {
  WaveState psi(grid);
  psi[grid.flat_index(labels)] = 1.0;
  return psi;
}

WaveState WaveState::plane_wave(const GridSpec& grid, std::span<const int> k) {
  if (static_cast<int>(k.size()) != grid.n) throw InvalidArgument("plane_wave: frequency arity mismatch");
  WaveState psi(grid);
  const double amp = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto y = grid.labels(i);
    long dot = 0;
    for (int a = 0; a < grid.n; ++a) dot += static_cast<long>(k[static_cast<std::size_t>(a)]) * y[static_cast<std::size_t>(a)];
    // reduce before the trig call so large labels stay exact
    const long r = ((dot % grid.N) + grid.N) % grid.N;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / grid.N;
    psi[i] = std::polar(amp, phase);
  }
  return psi;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw InvalidArgument("inner: length mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

cplx inner(const WaveState& a, const WaveState& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  return inner(std::span<const cplx>(a.amplitudes()), std::span<const cplx>(b.amplitudes()));
}

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return acc;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw GridMismatch(std::string(where) + ": grid mismatch");
}

WaveState tensor_product(const GridSpec& grid, std::span<const std::vector<cplx>> factors) {
  if (static_cast<int>(factors.size()) != grid.n) throw InvalidArgument("tensor_product: need one factor per axis");
  for (const auto& f : factors)
    if (static_cast<int>(f.size()) != grid.N) throw InvalidArgument("tensor_product: factor length must be N");
  WaveState psi(grid);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    std::size_t rest = i;
    cplx v = 1.0;
    for (int a = grid.n - 1; a >= 0; --a) {
      v *= factors[static_cast<std::size_t>(a)][rest % static_cast<std::size_t>(grid.N)];
      rest /= static_cast<std::size_t>(grid.N);
    }
    psi[i] = v;
  }
  return psi;
}

}  // namespace fga
