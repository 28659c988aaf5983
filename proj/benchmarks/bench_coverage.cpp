#include <benchmark/benchmark.h>

#include "nlos/coverage.hpp"

static void BM_RequiredLaunchPower(benchmark::State& state) {
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlos::coverage::required_launch_power(0.01, 1.0, r));
    r = r < 2.0 ? r + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_RequiredLaunchPower);

static void BM_MaxCellRadius(benchmark::State& state) {
  double p = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlos::coverage::max_cell_radius(p, 0.01));
    p = p < 10.0 ? p + 1e-3 : 1.0;
  }
}
BENCHMARK(BM_MaxCellRadius);
