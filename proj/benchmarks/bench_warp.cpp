#include <benchmark/benchmark.h>

#include "topowarp/synthetic.hpp"
#include "topowarp/warp.hpp"

namespace {

using namespace topowarp;

void BM_WarpOrdered(benchmark::State& state) {
  const auto pair = synthetic::road_pair(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(warp(pair.pred, pair.gt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pair.pred.size()));
}
BENCHMARK(BM_WarpOrdered)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_WarpConverge(benchmark::State& state) {
  const auto pair = synthetic::road_pair(static_cast<int>(state.range(0)), 0);
  const WarpConfig cfg = WarpConfig::converge();
  for (auto _ : state) benchmark::DoNotOptimize(warp(pair.pred, pair.gt, cfg));
}
BENCHMARK(BM_WarpConverge)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_WarpNaive(benchmark::State& state) {
  const auto pair = synthetic::road_pair(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(naive_warp(pair.pred, pair.gt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pair.pred.size()));
}
BENCHMARK(BM_WarpNaive)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_CriticalMask3D(benchmark::State& state) {
  const auto pair = synthetic::blob_curve_pair(Shape(16, 64, 64), 1);
  for (auto _ : state) benchmark::DoNotOptimize(critical_mask(pair.pred, pair.gt));
}
BENCHMARK(BM_CriticalMask3D)->Unit(benchmark::kMillisecond);

}  // namespace
