#include <benchmark/benchmark.h>

#include "topowarp/rng.hpp"
#include "topowarp/simple_point.hpp"
#include "topowarp/synthetic.hpp"

namespace {

using namespace topowarp;

void BM_SimpleScan2D(benchmark::State& state) {
  SplitMix64 rng(1);
  const Grid g = synthetic::random_grid(Shape(256, 256), 0.5, rng);
  for (auto _ : state) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < g.size(); ++i) n += is_simple_at(g, g.shape().coord(i));
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SimpleScan2D);

void BM_SimpleScan3D(benchmark::State& state) {
  SplitMix64 rng(1);
  const auto adj = Adjacency::with_fg(state.range(0) ? Connectivity::N26 : Connectivity::N6, 3);
  const Grid g = synthetic::random_grid(Shape(16, 32, 32), 0.5, rng).with_adjacency(adj);
  for (auto _ : state) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < g.size(); ++i) n += is_simple_at(g, g.shape().coord(i));
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SimpleScan3D)->Arg(0)->Arg(1);

}  // namespace
