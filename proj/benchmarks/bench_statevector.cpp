#include <benchmark/benchmark.h>

#include "pseudoent/statevector.hpp"

using namespace pseudoent;

static void BM_SubsetPhaseDirect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto spec = SubsetPhaseSpec::from_seed(n, k, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_subset_phase_direct(spec));
  }
}
BENCHMARK(BM_SubsetPhaseDirect)
    ->Args({12, 4})
    ->Args({16, 8})
    ->Args({20, 10})
    ->Unit(benchmark::kMillisecond);

static void BM_SubsetPhaseCircuit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = SubsetPhaseSpec::from_seed(n, n / 2, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prepare_subset_phase_circuit(spec));
  }
}
BENCHMARK(BM_SubsetPhaseCircuit)->Arg(10)->Arg(12)->Arg(14)->Unit(
    benchmark::kMillisecond);

static void BM_HaarSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(haar_sample(n, seed++));
  }
}
BENCHMARK(BM_HaarSample)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
