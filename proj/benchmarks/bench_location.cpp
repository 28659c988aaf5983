#include <benchmark/benchmark.h>

#include "nlos/location.hpp"

using namespace nlos::location;

namespace {

CellGrid make_grid(int n) {
  std::set<CellId> reporting;
  for (int r = 0; r < n; ++r) reporting.insert({r, n / 2});
  return CellGrid(n, n, 1.0, reporting, Adjacency::Four);
}

}  // namespace

static void BM_SearchOrder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CellGrid grid = make_grid(n);
  for (auto _ : state) benchmark::DoNotOptimize(search_order(grid, {0, n / 2}));
}
BENCHMARK(BM_SearchOrder)->Arg(4)->Arg(8)->Arg(32);

static void BM_Locate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CellGrid grid = make_grid(n);
  LocationDB db;
  db.register_initial(grid, "n", {0, n / 2}, 0);
  const CellId target{n - 1, n - 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(locate(db, grid, "n", [&](CellId c) { return c == target; }));
}
BENCHMARK(BM_Locate)->Arg(4)->Arg(8)->Arg(32);
