#include <benchmark/benchmark.h>

#include "pseudoent/moments.hpp"
#include "pseudoent/prmatrix.hpp"

using namespace pseudoent;

static void BM_AveragedSubsetMoment(benchmark::State& state) {
  const int n_dim = static_cast<int>(state.range(0));
  const int subset = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_subset_moment(n_dim, subset, 2));
  }
}
BENCHMARK(BM_AveragedSubsetMoment)
    ->Args({8, 4})
    ->Args({16, 4})
    ->Args({16, 8})
    ->Unit(benchmark::kMillisecond);

static void BM_TraceDistanceToHaar(benchmark::State& state) {
  const int n_dim = static_cast<int>(state.range(0));
  const auto avg = averaged_subset_moment(n_dim, 4, 2);
  const auto haar = sym_projector_moment(n_dim, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_distance(avg, haar));
  }
}
BENCHMARK(BM_TraceDistanceToHaar)->Arg(8)->Arg(16)->Unit(
    benchmark::kMillisecond);

static void BM_FrobeniusStat(benchmark::State& state) {
  const SignMatrix m =
      build_high_entropy(8, 8, SeededKey(5, KeyRole::HashCoeffs));
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobenius_stat(m));
  }
}
BENCHMARK(BM_FrobeniusStat)->Unit(benchmark::kMillisecond);

static void BM_BuildHighEntropy(benchmark::State& state) {
  const int half = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_high_entropy(
        half, half, SeededKey(seed++, KeyRole::HashCoeffs)));
  }
}
BENCHMARK(BM_BuildHighEntropy)->Arg(6)->Arg(8)->Unit(
    benchmark::kMillisecond);

BENCHMARK_MAIN();
