#include <benchmark/benchmark.h>

#include "delaystab/oracle.hpp"
#include "delaystab/region.hpp"
#include "delaystab/stabilizability.hpp"

using namespace delaystab;

namespace {

const NormalizedPlant kExample({0.6, 0.8});

void BM_Analyze(benchmark::State& state) {
  for (auto _ : state) {
    const HarmonicContext ctx(kExample);
    benchmark::DoNotOptimize(analyze(ctx));
  }
}
BENCHMARK(BM_Analyze);

void BM_BuildRegion(benchmark::State& state) {
  const HarmonicContext ctx(kExample);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_region(ctx, 0.5, PlantCase::Case1));
  }
}
BENCHMARK(BM_BuildRegion);

void BM_SweepH(benchmark::State& state) {
  const HarmonicContext ctx(kExample);
  const HInterval iv = admissible_h(ctx, PlantCase::Case1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_h(ctx, iv, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_SweepH)->Arg(5)->Arg(20)->UseRealTime();

void BM_CountRhpZeros(benchmark::State& state) {
  const ContourSpec contour{30.0, 40.0 * std::numbers::pi, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_rhp_zeros(kExample, {0.5, 1.0, 0.5}, contour));
  }
}
BENCHMARK(BM_CountRhpZeros)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ZoneScan(benchmark::State& state) {
  PlantSpec base;
  base.time_constants = {1.0, 1.0};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scan_parameter_plane(base, {"T1", -3.0, 3.0, steps}, {"T2", -3.0, 3.0, steps}));
  }
}
BENCHMARK(BM_ZoneScan)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
