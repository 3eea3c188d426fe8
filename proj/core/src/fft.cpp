#include "fga/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fga/error.hpp"

namespace fga {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

// (-1)^{sum k_a} phase between storage origin (label -N/2) and the FFTW origin
double parity_of_bins(const GridSpec& grid, std::size_t flat) {
  int sum = 0;
  for (int a = 0; a < grid.n; ++a) {
    sum += bin_label(static_cast<int>(flat % static_cast<std::size_t>(grid.N)), grid.N);
    flat /= static_cast<std::size_t>(grid.N);
  }
  return (sum % 2 == 0) ? 1.0 : -1.0;
}

// FFT bin flat index -> centered storage flat index for the same label vector
std::size_t bin_to_centered(const GridSpec& grid, std::size_t flat) {
  std::size_t out = 0;
  std::size_t mult = 1;
  for (int a = 0; a < grid.n; ++a) {
    const int q = static_cast<int>(flat % static_cast<std::size_t>(grid.N));
    flat /= static_cast<std::size_t>(grid.N);
    const int k = bin_label(q, grid.N);
    out += mult * static_cast<std::size_t>(k + grid.N / 2);
    mult *= static_cast<std::size_t>(grid.N);
  }
  return out;
}

}  // namespace

FftPlan::FftPlan(const GridSpec& grid) : size_(grid.size()) {
  std::vector<int> dims(static_cast<std::size_t>(grid.n), grid.N);
  std::vector<cplx> scratch(size_);
  std::lock_guard lock(planner_mutex());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  forward_ = fftw_plan_dft(grid.n, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_ = fftw_plan_dft(grid.n, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (forward_ == nullptr || backward_ == nullptr) throw Error("FftPlan: FFTW planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != size_) throw InvalidArgument("FftPlan::forward: buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(data), as_fftw(data));
}

void FftPlan::backward(std::span<cplx> data) const {
  if (data.size() != size_) throw InvalidArgument("FftPlan::backward: buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(data), as_fftw(data));
}

std::shared_ptr<const FftPlan> fft_plan(const GridSpec& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{grid.n, grid.N}];
  if (!slot) slot = std::make_shared<const FftPlan>(grid);
  return slot;
}

std::vector<double> frequency_norm2(const GridSpec& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t rest = i;
    double s = 0.0;
    for (int a = 0; a < grid.n; ++a) {
      const int k = bin_label(static_cast<int>(rest % static_cast<std::size_t>(grid.N)), grid.N);
      rest /= static_cast<std::size_t>(grid.N);
      s += static_cast<double>(k) * k;
    }
    out[i] = s;
  }
  return out;
}

std::vector<double> kinetic_multiplier(const GridSpec& grid) {
  auto out = frequency_norm2(grid);
  const double scale = 4.0 * std::numbers::pi * std::numbers::pi / (grid.L * grid.L);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> fourier_coefficients(const WaveState& psi) {
  const auto& grid = psi.grid();
  std::vector<cplx> work = psi.amplitudes();
  fft_plan(grid)->forward(work);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  std::vector<cplx> out(work.size());
  for (std::size_t q = 0; q < work.size(); ++q)
    out[bin_to_centered(grid, q)] = work[q] * (scale * parity_of_bins(grid, q));
  return out;
}

WaveState from_fourier_coefficients(const GridSpec& grid, std::span<const cplx> coefficients) {
  if (coefficients.size() != grid.size())
    throw InvalidArgument("from_fourier_coefficients: coefficient count mismatch");
  std::vector<cplx> work(grid.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (std::size_t q = 0; q < work.size(); ++q)
    work[q] = coefficients[bin_to_centered(grid, q)] * (scale * parity_of_bins(grid, q));
  fft_plan(grid)->backward(work);
  return WaveState(grid, std::move(work));
}

}  // namespace fga
