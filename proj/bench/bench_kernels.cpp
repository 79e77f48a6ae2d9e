#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sdepth/directions.hpp"
#include "sdepth/kernels.hpp"

namespace {

using namespace sdepth;

Matrix gaussian_rows(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix y(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) y(i, j) = g(rng);
  }
  return y;
}

struct Setup {
  Matrix y;
  Matrix dirs;
  std::vector<SpdMatrix> scatters;
};

Setup make_setup(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const int N = static_cast<int>(state.range(2));
  return {gaussian_rows(n, k, 1), generate_directions(k, DirectionBudget::uniform(N, 2)), {SpdMatrix::identity(k)}};
}

template <auto Kernel>
void scatter_min(benchmark::State& state) {
  const Setup s = make_setup(state);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.y, s.dirs, s.scatters));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(2));
}

template <auto Kernel>
void profile_bounds(benchmark::State& state) {
  const Setup s = make_setup(state);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.y, s.dirs, s.scatters.front()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(2));
}

template <auto Kernel>
void sorted_table(benchmark::State& state) {
  const Setup s = make_setup(state);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.y, s.dirs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(2));
}

template <auto Kernel>
void scatter_min_sorted(benchmark::State& state) {
  const Setup s = make_setup(state);
  const Matrix table = kernels::sorted_square_projections_serial(s.y, s.dirs);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(table, s.dirs, s.scatters));
  state.SetItemsProcessed(state.iterations() * state.range(2));
}

template <auto Kernel>
void profile_bounds_sorted(benchmark::State& state) {
  const Setup s = make_setup(state);
  const Matrix table = kernels::sorted_square_projections_serial(s.y, s.dirs);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(table, s.dirs, s.scatters.front()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(2));
}

template <auto Kernel>
void location_min(benchmark::State& state) {
  const Setup s = make_setup(state);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.y, s.dirs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(2));
}

template <auto Kernel>
void sample_location_depths(benchmark::State& state) {
  const Setup s = make_setup(state);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.y, s.dirs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(2));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({500, 2, 10000})->Args({2000, 3, 10000})->Args({2000, 4, 10000})->Unit(benchmark::kMillisecond);
}

void small_sizes(benchmark::internal::Benchmark* b) {
  b->Args({200, 2, 200})->Args({1000, 3, 200})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(scatter_min<kernels::scatter_min_serial>)->Name("scatter_min/serial")->Apply(sizes);
BENCHMARK(scatter_min<kernels::scatter_min_parallel>)->Name("scatter_min/parallel")->Apply(sizes);
BENCHMARK(profile_bounds<kernels::profile_bounds_serial>)->Name("profile_bounds/serial")->Apply(sizes);
BENCHMARK(profile_bounds<kernels::profile_bounds_parallel>)->Name("profile_bounds/parallel")->Apply(sizes);
BENCHMARK(sorted_table<kernels::sorted_square_projections_serial>)->Name("sorted_table/serial")->Apply(sizes);
BENCHMARK(sorted_table<kernels::sorted_square_projections_parallel>)->Name("sorted_table/parallel")->Apply(sizes);
BENCHMARK(scatter_min_sorted<kernels::scatter_min_sorted_serial>)->Name("scatter_min_sorted/serial")->Apply(sizes);
BENCHMARK(scatter_min_sorted<kernels::scatter_min_sorted_parallel>)->Name("scatter_min_sorted/parallel")->Apply(sizes);
BENCHMARK(profile_bounds_sorted<kernels::profile_bounds_sorted_serial>)
    ->Name("profile_bounds_sorted/serial")
    ->Apply(sizes);
BENCHMARK(profile_bounds_sorted<kernels::profile_bounds_sorted_parallel>)
    ->Name("profile_bounds_sorted/parallel")
    ->Apply(sizes);
BENCHMARK(location_min<kernels::location_min_serial>)->Name("location_min/serial")->Apply(sizes);
BENCHMARK(location_min<kernels::location_min_parallel>)->Name("location_min/parallel")->Apply(sizes);
BENCHMARK(sample_location_depths<kernels::sample_location_depths_serial>)
    ->Name("sample_location_depths/serial")
    ->Apply(small_sizes);
BENCHMARK(sample_location_depths<kernels::sample_location_depths_parallel>)
    ->Name("sample_location_depths/parallel")
    ->Apply(small_sizes);

BENCHMARK_MAIN();
