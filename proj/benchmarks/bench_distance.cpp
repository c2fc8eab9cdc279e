#include <benchmark/benchmark.h>

#include "topowarp/distance.hpp"
#include "topowarp/synthetic.hpp"

namespace {

using namespace topowarp;

void BM_DistanceTransform(benchmark::State& state) {
  const auto metric = static_cast<Metric>(state.range(0));
  const auto pair = synthetic::road_pair(512, 3);
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(pair.gt, metric));
  state.SetLabel(to_string(metric));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pair.gt.size()));
}
BENCHMARK(BM_DistanceTransform)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform3D(benchmark::State& state) {
  const auto metric = static_cast<Metric>(state.range(0));
  const auto pair = synthetic::blob_curve_pair(Shape(32, 96, 96), 3);
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(pair.gt, metric));
  state.SetLabel(to_string(metric));
}
BENCHMARK(BM_DistanceTransform3D)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
