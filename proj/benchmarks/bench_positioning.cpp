#include <array>

#include <benchmark/benchmark.h>

#include "nlos/positioning.hpp"

using namespace nlos;
using namespace nlos::positioning;

static void BM_Trilaterate(benchmark::State& state) {
  const std::array<UltrasonicReceiver, 3> rx{{{"u0", {0, 0}}, {"u1", {4, 0}}, {"u2", {0, 4}}}};
  const Point2D truth{1.3, 2.7};
  std::array<double, 3> d;
  for (int k = 0; k < 3; ++k) d[k] = distance(truth, rx[k].position);
  for (auto _ : state) benchmark::DoNotOptimize(trilaterate(rx, d));
}
BENCHMARK(BM_Trilaterate);

static void BM_SimulateRanging(benchmark::State& state) {
  const std::array<UltrasonicReceiver, 3> rx{{{"u0", {0, 0}}, {"u1", {4, 0}}, {"u2", {0, 4}}}};
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_ranging({1.3, 2.7}, rx, kDefaultSpeedOfSound, 1e-6, ++seed));
}
BENCHMARK(BM_SimulateRanging);
