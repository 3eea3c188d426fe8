#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fga/grid.hpp"

namespace fga {

/// In-place n-dimensional complex FFT over a grid's storage array (FFTW backend).
/// Plans are immutable after construction; execute() is safe from several threads
/// on distinct buffers.
class FftPlan {
 public:
  explicit FftPlan(const GridSpec& grid);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// X_q = sum_p exp(-i 2 pi q.p / N) x_p (unnormalized).
  void forward(std::span<cplx> data) const;
  /// x_p = sum_q exp(+i 2 pi q.p / N) X_q (unnormalized).
  void backward(std::span<cplx> data) const;

  std::size_t size() const noexcept { return size_; }

 private:
  void* forward_ = nullptr;
  void* backward_ = nullptr;
  std::size_t size_ = 0;
};

/// Shared plan for a grid shape; plans are cached process-wide.
std::shared_ptr<const FftPlan> fft_plan(const GridSpec& grid);

/// Centered frequency label carried by FFT bin q along one axis.
inline int bin_label(int q, int N) noexcept { return q < N / 2 ? q : q - N; }

/// 4 pi^2 |k|^2 / L^2 indexed by FFT bin (the layout forward() produces).
std::vector<double> kinetic_multiplier(const GridSpec& grid);

/// |k|_2^2 in label units, indexed by FFT bin.
std::vector<double> frequency_norm2(const GridSpec& grid);

/// Unitary coefficients c_k = <p_k|psi> in the centered storage layout.
std::vector<cplx> fourier_coefficients(const WaveState& psi);
/// Inverse of fourier_coefficients.
WaveState from_fourier_coefficients(const GridSpec& grid, std::span<const cplx> coefficients);

}  // namespace fga
