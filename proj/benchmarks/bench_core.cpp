#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "fga/adiabatic.hpp"
#include "fga/fd_oracle.hpp"
#include "fga/polytope.hpp"
#include "fga/spectra.hpp"

using namespace fga;

static void BM_HamiltonianApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const GridSpec g = build_grid(n, N, 12.0);
  const auto h = make_hamiltonian(*isotropic_quadratic(n, 1.0), g);
  std::mt19937_64 rng(1);
  const WaveState psi = WaveState::random(g, rng);
  std::vector<cplx> out(g.size());
  for (auto _ : state) {
    h.apply(psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_HamiltonianApply)->Args({1, 1024})->Args({2, 128})->Args({3, 32});

static void BM_DenseSpectrum(benchmark::State& state) {
  const GridSpec g = build_grid(1, static_cast<int>(state.range(0)), 12.0);
  const auto h = make_hamiltonian(*isotropic_quadratic(1, 1.0), g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(h, 2, 1e-8).lambda0);
}
BENCHMARK(BM_DenseSpectrum)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_LanczosSpectrum(benchmark::State& state) {
  const GridSpec g = build_grid(2, static_cast<int>(state.range(0)), 12.0);
  const auto h = make_hamiltonian(*isotropic_quadratic(2, 1.0), g);
  SolveOptions o;
  o.dense_limit = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(h, o).lambda0);
}
BENCHMARK(BM_LanczosSpectrum)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Evolve(benchmark::State& state) {
  const GridSpec g = build_grid(1, 128, 12.0);
  const auto v0 = eval_potential(*isotropic_quadratic(1, 1.0), g);
  const auto vT = eval_potential(*quadratic({0.5}, {1.0}), g);
  const WaveState psi = WaveState::basis(g, std::vector<int>{0});
  const HamiltonianOp h(g, v0);
  const double norm = h.kinetic_max() + std::max(*std::max_element(v0.begin(), v0.end()),
                                                 *std::max_element(vT.begin(), vT.end()));
  // longest T the requested step count allows
  Schedule s{0.1 * static_cast<double>(state.range(0)) / norm, state.range(0), 0, false};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, v0, vT, s).max_norm_drift);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evolve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_FdOracle(benchmark::State& state) {
  const auto planes = regular_polygon(16, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fd_dirichlet_lambda0(planes, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FdOracle)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
