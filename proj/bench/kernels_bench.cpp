// Serial reference kernels against the OpenMP dense-box kernels.

#include <benchmark/benchmark.h>

#include "nls/construction.hpp"
#include "nls/duhamel.hpp"
#include "nls/lattice.hpp"
#include "nls/reference.hpp"
#include "nls/series.hpp"

namespace {

nls::SparseSpectrum bench_data(int d, std::int64_t N, std::int64_t A) {
  return nls::build_background(d, nls::BackgroundProfile::gaussian(1.0, 2.0)) +
         nls::build_phi_n(d, N, A, 1.0);
}

void BM_ConvolveReference(benchmark::State& state) {
  const auto f = bench_data(static_cast<int>(state.range(0)), 64, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nls::reference::convolve(f, f));
}

void BM_ConvolveParallel(benchmark::State& state) {
  const auto f = bench_data(static_cast<int>(state.range(0)), 64, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nls::convolve(f, f));
}

void BM_TrilinearReference(benchmark::State& state) {
  const auto f = bench_data(static_cast<int>(state.range(0)), 32, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nls::reference::trilinear_product(f, f, f));
}

void BM_TrilinearParallel(benchmark::State& state) {
  const auto f = bench_data(static_cast<int>(state.range(0)), 32, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nls::trilinear_product(f, f, f));
}

void BM_Xi1Reference(benchmark::State& state) {
  const auto f = nls::build_phi_n(1, 256, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nls::reference::xi1_exact(f, 1e-6));
}

void BM_Xi1Parallel(benchmark::State& state) {
  const auto f = nls::build_phi_n(1, 256, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nls::xi1_exact(f, 1e-6));
}

void BM_BuildSeries(benchmark::State& state) {
  const auto f = nls::build_background(1, nls::BackgroundProfile::gaussian(0.5, 1.0));
  const double t = 0.5 * nls::lwp_radius(f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nls::build_series(f, 4, t, nls::QuadratureSpec{static_cast<int>(state.range(0))}));
  }
}

}  // namespace

BENCHMARK(BM_ConvolveReference)->Args({1, 16})->Args({2, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveParallel)->Args({1, 16})->Args({2, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrilinearReference)->Args({1, 8})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrilinearParallel)->Args({1, 8})->Args({2, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Xi1Reference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Xi1Parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildSeries)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
