// Serial reference executor vs the OpenMP executor on the same grid.
// Both produce bit-identical tables; only wall time differs.

#include <benchmark/benchmark.h>

#include "vicar/harness.hpp"
#include "vicar/presets.hpp"

using namespace vicar;

namespace {

ExperimentSpec bench_spec(std::size_t runs) {
  ExperimentSpec spec = make_preset("fig2", runs, 42);
  for (auto& c : spec.cells) {
    c.horizon = 200;
    c.epsilon = 1.0;
    c.tau = Temperature::softmax(0.01);
  }
  return spec;
}

void BM_ExecuteSerial(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(execute_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          static_cast<std::int64_t>(spec.cells.size()));
}

void BM_ExecuteParallel(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(execute_parallel(spec, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          static_cast<std::int64_t>(spec.cells.size()));
}

// One run of the baseline dyad per mode.
void BM_SimulateRun(benchmark::State& state) {
  CellConfig cell = baseline_cell("bench", static_cast<Mode>(state.range(0)));
  cell.epsilon = 1.0;
  cell.tau = Temperature::softmax(0.01);
  const SystemConfig config = cell.system_config();
  std::uint64_t run = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_run(cell, config, 42, 0, run++));
  state.SetLabel(to_string(cell.mode));
}

}  // namespace

BENCHMARK(BM_ExecuteSerial)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExecuteParallel)
    ->ArgsProduct({{512}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_SimulateRun)
    ->DenseRange(0, 5)
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
