#pragma once

// Discrete torus [-L/2, L/2)^n sampled at y L / N, y in {-N/2, ..., N/2-1}^n.
//
// Storage convention (used everywhere in the library): flat index is row-major
// with axis 0 slowest, and the label y_a is stored at position y_a + N/2.
// Frequency labels k use the same centered set and the same layout.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fga {

using cplx = std::complex<double>;

struct GridSpec {
  int n = 1;       // spatial dimension
  int N = 4;       // points per axis, power of two
  double L = 1.0;  // torus length

  std::size_t size() const noexcept;
  double spacing() const noexcept { return L / N; }

  /// Centered label along one axis for a storage coordinate in [0, N).
  int label(int coord) const noexcept { return coord - N / 2; }
  /// Storage coordinate for a label, wrapping modulo N.
  int coord(int label) const noexcept;

  /// Multi-index of labels for a flat index.
  std::vector<int> labels(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> labels) const;
  /// Position y L / N of a flat index.
  std::vector<double> position(std::size_t flat) const;
  void position(std::size_t flat, std::span<double> out) const;

  bool operator==(const GridSpec& other) const noexcept = default;
};

/// Largest grid (points) build_grid accepts unless overridden.
inline constexpr std::size_t kDefaultGridBudget = std::size_t{1} << 24;

bool is_power_of_two(long v) noexcept;

/// Validates N (power of two, >= 4), n >= 1, L > 0, and N^n against the memory budget.
GridSpec build_grid(int n, int N, double L, std::size_t max_points = kDefaultGridBudget);

/// Sorted labels along one axis: -N/2 .. N/2-1.
std::vector<int> axis_labels(const GridSpec& grid);
/// Positions along one axis.
std::vector<double> axis_positions(const GridSpec& grid);

/// Complex amplitudes over the grid in the storage convention above.
class WaveState {
 public:
  WaveState() = default;
  explicit WaveState(GridSpec grid);
  WaveState(GridSpec grid, std::vector<cplx> amplitudes);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  std::vector<cplx>& amplitudes() noexcept { return amplitudes_; }
  const std::vector<cplx>& amplitudes() const noexcept { return amplitudes_; }
  cplx& operator[](std::size_t i) { return amplitudes_[i]; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  /// Scales to unit norm; throws on the zero vector.
  WaveState& normalize();

  /// Position basis state |y>.
  static WaveState basis(const GridSpec& grid, std::span<const int> labels);
  /// Plane wave |p_k> = N^{-n/2} exp(i 2 pi k.y / N).
  static WaveState plane_wave(const GridSpec& grid, std::span<const int> k);
  /// Gaussian-distributed random amplitudes, normalized.
  template <class Rng>
  static WaveState random(const GridSpec& grid, Rng& rng);

 private:
  GridSpec grid_;
  std::vector<cplx> amplitudes_;
};

/// <a|b> (antilinear in a).
cplx inner(const WaveState& a, const WaveState& b);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

/// Tensor product of per-axis single-register states (each of length N).
WaveState tensor_product(const GridSpec& grid, std::span<const std::vector<cplx>> factors);

}  // namespace fga

#include <random>

namespace fga {

template <class Rng>
WaveState WaveState::random(const GridSpec& grid, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  WaveState psi(grid);
  for (auto& a : psi.amplitudes_) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = cplx(re, im);
  }
  psi.normalize();
  return psi;
}

}  // namespace fga
