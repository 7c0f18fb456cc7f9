// Parallel kernels against their serial twins, plus whole transforms.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nlslab/kernels.hpp"
#include "nlslab/radial_grid.hpp"

namespace {

using nlslab::cplx;

std::vector<double> test_matrix(std::size_t n) {
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = std::sin(0.37 * static_cast<double>(i));
  return a;
}

std::vector<cplx> test_vectors(std::size_t n, std::size_t count) {
  std::vector<cplx> x(n * count);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = {std::cos(0.11 * static_cast<double>(i)), std::sin(0.05 * static_cast<double>(i))};
  }
  return x;
}

template <bool Serial>
void BM_matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = test_matrix(n);
  const auto x = test_vectors(n, 1);
  std::vector<cplx> y(n);
  for (auto _ : state) {
    if constexpr (Serial) {
      nlslab::kernels::matvec_serial(a, n, x, y);
    } else {
      nlslab::kernels::matvec(a, n, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <bool Serial>
void BM_matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto count = static_cast<std::size_t>(state.range(1));
  const auto a = test_matrix(n);
  const auto x = test_vectors(n, count);
  std::vector<cplx> y(n * count);
  for (auto _ : state) {
    if constexpr (Serial) {
      nlslab::kernels::matmul_serial(a, n, x, y, count);
    } else {
      nlslab::kernels::matmul(a, n, x, y, count);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * count));
}

void BM_forward_transform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = nlslab::build_grid(4, n, 64.0);
  const auto x = test_vectors(n, 1);
  std::vector<cplx> y(n);
  for (auto _ : state) {
    g->forward(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_build_grid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nlslab::build_grid(4, n, 64.0));
}

}  // namespace

BENCHMARK(BM_matvec<false>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matvec<true>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matmul<false>)->Args({4096, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matmul<true>)->Args({4096, 32})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forward_transform)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_grid)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
