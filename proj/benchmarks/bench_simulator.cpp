#include <benchmark/benchmark.h>

#include "nlos/simulator.hpp"

using namespace nlos;
using namespace nlos::sim;

namespace {

RoomConfig demo_room() {
  RoomConfig cfg;
  cfg.width = cfg.height = 4;
  cfg.grid.rows = cfg.grid.cols = 4;
  cfg.grid.cell_size = 1;
  for (int r = 0; r < 4; ++r) cfg.grid.reporting.insert({r, 1});
  cfg.receiver = {0.01, 1e-4};
  cfg.beam = default_beam(1.0, cfg.receiver);
  cfg.ultrasonic_receivers = {{"u0", {0, 0}}, {"u1", {4, 0}}, {"u2", {0, 4}}};
  cfg.tof_noise_sigma = 1e-6;
  cfg.rng_seed = 20240501;
  cfg.nodes = {{"alice", {1.5, 1.5}, {}, 0.0, "open-sesame"},
               {"bob", {3.5, 3.5}, {{0.5, 3.5}}, 0.4, "open-sesame"}};
  return cfg;
}

}  // namespace

static void BM_StepOnly(benchmark::State& state) {
  const RoomConfig cfg = demo_room();
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, 16, {}));
}
BENCHMARK(BM_StepOnly)->Unit(benchmark::kMillisecond);

static void BM_DemoWithRequest(benchmark::State& state) {
  const RoomConfig cfg = demo_room();
  const std::vector<DataRequest> reqs{{12, "alice", "bob"}};
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, 16, reqs));
}
BENCHMARK(BM_DemoWithRequest)->Unit(benchmark::kMillisecond);
