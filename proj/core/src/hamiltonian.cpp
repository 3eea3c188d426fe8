#include "fga/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fga/error.hpp"

namespace fga {

HamiltonianOp::HamiltonianOp(GridSpec grid, std::vector<double> potential_diag)
    : grid_(grid),
      potential_(std::move(potential_diag)),
      kinetic_(std::make_shared<const std::vector<double>>(fga::kinetic_multiplier(grid))),
      plan_(fft_plan(grid)),
      dimension_(grid.size()) {
  if (potential_.size() != grid_.size())
    throw InvalidArgument("HamiltonianOp: potential length does not match the grid");
  for (double v : potential_)
    if (!std::isfinite(v)) throw NonFiniteValue("HamiltonianOp: non-finite potential value");
}

std::vector<std::size_t> HamiltonianOp::active_indices() const {
  std::vector<std::size_t> out;
  out.reserve(dimension_);
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (is_active(i)) out.push_back(i);
  return out;
}

double HamiltonianOp::kinetic_max() const noexcept {
  return *std::max_element(kinetic_->begin(), kinetic_->end());
}

double HamiltonianOp::potential_max() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < potential_.size(); ++i)
    if (is_active(i)) m = std::max(m, std::abs(potential_[i]));
  return m;
}

double HamiltonianOp::norm_estimate() const noexcept { return kinetic_max() + potential_max(); }

void HamiltonianOp::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t size = grid_.size();
  if (in.size() != size || out.size() != size) throw GridMismatch("HamiltonianOp::apply: buffer size mismatch");
  std::vector<cplx> work(in.begin(), in.end());
  if (restricted())
    for (std::size_t i = 0; i < size; ++i)
      if (!active_[i]) work[i] = 0.0;
  plan_->forward(work);
  const double inv = 1.0 / static_cast<double>(size);
  const auto& mult = *kinetic_;
  for (std::size_t q = 0; q < size; ++q) work[q] *= mult[q] * inv;
  plan_->backward(work);
  for (std::size_t i = 0; i < size; ++i) {
    if (is_active(i))
      out[i] = work[i] + potential_[i] * in[i];
    else
      out[i] = 0.0;
  }
}

HamiltonianOp HamiltonianOp::restrict_to(const std::vector<std::uint8_t>& mask) const {
  if (mask.size() != grid_.size()) throw GridMismatch("restrict_to: mask size does not match the grid");
  HamiltonianOp out = *this;
  out.active_.assign(grid_.size(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (is_active(i) && mask[i]) {
      out.active_[i] = 1;
      ++count;
    }
  }
  if (count == 0) throw InvalidArgument("restrict_to: mask selects no grid points");
  out.dimension_ = count;
  return out;
}

HamiltonianOp HamiltonianOp::with_potential(std::vector<double> potential_diag) const {
  if (potential_diag.size() != grid_.size())
    throw InvalidArgument("with_potential: potential length does not match the grid");
  HamiltonianOp out = *this;
  out.potential_ = std::move(potential_diag);
  return out;
}

HamiltonianOp make_hamiltonian(const PotentialSpec& potential, const GridSpec& grid) {
  return HamiltonianOp(grid, eval_potential(potential, grid));
}

WaveState apply_kinetic(const WaveState& psi) {
  const auto& grid = psi.grid();
  std::vector<cplx> work = psi.amplitudes();
  const auto plan = fft_plan(grid);
  plan->forward(work);
  const auto mult = fga::kinetic_multiplier(grid);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (std::size_t q = 0; q < work.size(); ++q) work[q] *= mult[q] * inv;
  plan->backward(work);
  return WaveState(grid, std::move(work));
}

WaveState apply_hamiltonian(const HamiltonianOp& h, const WaveState& psi) {
  require_same_grid(h.grid(), psi.grid(), "apply_hamiltonian");
  WaveState out(psi.grid());
  h.apply(psi.amplitudes(), out.amplitudes());
  return out;
}

double energy(const HamiltonianOp& h, const WaveState& psi) {
  require_same_grid(h.grid(), psi.grid(), "energy");
  double nrm2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (h.is_active(i)) nrm2 += std::norm(psi[i]);
  if (!(nrm2 > 0.0)) throw InvalidArgument("energy: zero state");
  const WaveState hpsi = apply_hamiltonian(h, psi);
  const cplx num = inner(psi, hpsi);
  const double e = num.real() / nrm2;
  const double tol = 1e-10 * std::max({1.0, std::abs(e), h.norm_estimate() * 1e-3});
  if (std::abs(num.imag() / nrm2) > tol) throw Error("energy: Rayleigh quotient has a non-negligible imaginary part");
  return e;
}

Eigen::MatrixXd kinetic_matrix_1d(int N, double L) {
  // K[y, y'] depends on (y - y') mod N only
  std::vector<double> row(static_cast<std::size_t>(N), 0.0);
  const double scale = 4.0 * std::numbers::pi * std::numbers::pi / (L * L);
  for (int d = 0; d < N; ++d) {
    double acc = 0.0;
    for (int k = -N / 2; k < N / 2; ++k) {
      const long r = (static_cast<long>(k) * d) % N;
      acc += static_cast<double>(k) * k * std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / N);
    }
    row[static_cast<std::size_t>(d)] = scale * acc / N;
  }
  Eigen::MatrixXd k(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) k(i, j) = row[static_cast<std::size_t>(((i - j) % N + N) % N)];
  return k;
}

Eigen::MatrixXd dense_matrix(const HamiltonianOp& h) {
  const auto& grid = h.grid();
  const auto idx = h.active_indices();
  const auto dim = static_cast<Eigen::Index>(idx.size());
  const Eigen::MatrixXd k1 = kinetic_matrix_1d(grid.N, grid.L);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::vector<int>> coords(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    auto lbl = grid.labels(idx[p]);
    for (auto& l : lbl) l += grid.N / 2;
    coords[p] = std::move(lbl);
  }
  for (Eigen::Index p = 0; p < dim; ++p) {
    const auto& cp = coords[static_cast<std::size_t>(p)];
    for (Eigen::Index q = p; q < dim; ++q) {
      const auto& cq = coords[static_cast<std::size_t>(q)];
      // K_Q couples points that differ along at most one axis
      int differing = -1;
      int ndiff = 0;
      for (int a = 0; a < grid.n && ndiff < 2; ++a)
        if (cp[static_cast<std::size_t>(a)] != cq[static_cast<std::size_t>(a)]) {
          differing = a;
          ++ndiff;
        }
      double v = 0.0;
      if (ndiff == 0) {
        for (int a = 0; a < grid.n; ++a) v += k1(cp[static_cast<std::size_t>(a)], cp[static_cast<std::size_t>(a)]);
        v += h.potential_diag()[idx[static_cast<std::size_t>(p)]];
      } else if (ndiff == 1) {
        v = k1(cp[static_cast<std::size_t>(differing)], cq[static_cast<std::size_t>(differing)]);
      }
      m(p, q) = v;
      m(q, p) = v;
    }
  }
  return m;
}

}  // namespace fga
