// Serial reference sweep against the OpenMP sweep on the same points.
#include <benchmark/benchmark.h>

#include "leo/harness.hpp"

namespace {

leo::RunConfig bench_config() {
  leo::RunConfig c = leo::desk_profile();
  c.scenario.n_users = 20;
  c.seed_count = 4;
  c.axis = leo::Axis::kNSatellites;
  c.values = {2, 4};
  return c;
}

void BM_SweepSerial(benchmark::State& state) {
  const leo::RunConfig c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(leo::sweep_serial(c));
}

void BM_SweepParallel(benchmark::State& state) {
  const leo::RunConfig c = bench_config();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(leo::sweep_parallel(c, workers));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->Iterations(1)->UseRealTime();
BENCHMARK(BM_SweepParallel)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Unit(benchmark::kMillisecond)
    ->Iterations(1)
    ->UseRealTime();

BENCHMARK_MAIN();
