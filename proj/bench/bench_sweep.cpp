#include <benchmark/benchmark.h>

#include <omp.h>

#include "opa/sweep.hpp"

namespace {

opa::SweepAxis axis() {
  opa::SimConfig c;
  c.grid_nodes = 50;
  c.grid_generators = 8;
  c.grid_lines = 75;
  c.days = 20;
  c.warmup_days = 5;
  return opa::parse_axis("b=0,0.1,0.2,0.3;control=false,true", c);
}

void BM_SweepSerial(benchmark::State& state) {
  const auto a = axis();
  for (auto _ : state) benchmark::DoNotOptimize(opa::run_sweep_serial(a, 2));
  state.counters["runs"] = static_cast<double>(a.points.size() * 2);
}

void BM_SweepParallel(benchmark::State& state) {
  const auto a = axis();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(opa::run_sweep(a, 2));
  state.counters["runs"] = static_cast<double>(a.points.size() * 2);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
