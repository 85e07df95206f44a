#include <benchmark/benchmark.h>
#include <omp.h>

#include "quartic/oracle.hpp"
#include "quartic/torsor.hpp"

using namespace quartic;

// fast kernel with the full OpenMP team
static void BM_torsor_parallel(benchmark::State& st) {
  const auto s = static_cast<Surface>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(torsor_count(s, st.range(1)).raw);
}

// same kernel pinned to one thread
static void BM_torsor_serial(benchmark::State& st) {
  const auto s = static_cast<Surface>(st.range(0));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  for (auto _ : st) benchmark::DoNotOptimize(torsor_count(s, st.range(1)).raw);
  omp_set_num_threads(saved);
}

// loose loops + validate_tuple
static void BM_torsor_reference(benchmark::State& st) {
  const auto s = static_cast<Surface>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(torsor_count_reference(s, st.range(1)).raw);
}

static void BM_parametrized(benchmark::State& st) {
  const auto s = static_cast<Surface>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(count_parametrized(s, st.range(1)).count);
}

BENCHMARK(BM_torsor_parallel)->ArgsProduct({{0, 1}, {1000, 100000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_torsor_serial)->ArgsProduct({{0, 1}, {1000, 100000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_torsor_reference)->ArgsProduct({{0, 1}, {100, 300}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parametrized)->ArgsProduct({{0, 1}, {100, 300}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
