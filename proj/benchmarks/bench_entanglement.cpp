#include <benchmark/benchmark.h>

#include "pseudoent/entanglement.hpp"
#include "pseudoent/statevector.hpp"

using namespace pseudoent;

static void BM_HalfCutSpectrumDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StateVector sv = haar_sample(n, 3ull);
  const Cut half = Cut::half(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt_spectrum(sv, half));
  }
}
BENCHMARK(BM_HalfCutSpectrumDense)->Arg(12)->Arg(14)->Arg(16)->Unit(
    benchmark::kMillisecond);

static void BM_HalfCutSpectrumSparse(benchmark::State& state) {
  const int n = 16;
  const int k = static_cast<int>(state.range(0));
  const StateVector sv =
      build_subset_phase_direct(SubsetPhaseSpec::from_seed(n, k, 3));
  const Cut half = Cut::half(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt_spectrum(sv, half));
  }
}
BENCHMARK(BM_HalfCutSpectrumSparse)->Arg(4)->Arg(8)->Unit(
    benchmark::kMicrosecond);

static void BM_AllCutsScan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StateVector sv =
      build_subset_phase_direct(SubsetPhaseSpec::from_seed(n, 4, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_scan(sv, CutFamily::all_cuts()));
  }
}
BENCHMARK(BM_AllCutsScan)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
