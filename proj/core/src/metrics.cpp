#include "topowarp/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "topowarp/parallel.hpp"
#include "topowarp/rng.hpp"
#include "topowarp/topology.hpp"

namespace topowarp {

double dice_score(const Grid& pred, const Grid& gt) {
  require_same_shape(pred.shape(), gt.shape(), "dice_score");
  std::size_t p = 0;
  std::size_t g = 0;
  std::size_t both = 0;
  const auto cp = pred.cells();
  const auto cg = gt.cells();
  for (std::size_t i = 0; i < cp.size(); ++i) {
    p += cp[i];
    g += cg[i];
    both += cp[i] & cg[i];
  }
  if (p + g == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(p + g);
}

double adapted_rand(const Grid& pred, const Grid& gt) {
  require_same_shape(pred.shape(), gt.shape(), "adapted_rand");
  const bool pred_empty = pred.empty();
  const bool gt_empty = gt.empty();
  if (pred_empty && gt_empty) return 1.0;
  if (pred_empty || gt_empty) return 0.0;

  const auto lp = connected_components(pred, Label::Foreground, pred.adjacency().fg());
  const auto lg = connected_components(gt, Label::Foreground, gt.adjacency().fg());
  std::unordered_map<std::uint64_t, std::int64_t> table;
  std::vector<std::int64_t> rows(static_cast<std::size_t>(lp.count) + 1, 0);
  std::vector<std::int64_t> cols(static_cast<std::size_t>(lg.count) + 1, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto a = lp.labels[i];
    const auto b = lg.labels[i];
    if (a == 0 || b == 0) continue;
    ++table[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)];
    ++rows[a];
    ++cols[b];
  }
  if (table.empty()) return 0.0;

  const auto squares = [](const auto& range) {
    long double s = 0;
    for (const auto v : range) s += static_cast<long double>(v) * v;
    return s;
  };
  long double joint = 0;
  for (const auto& [key, n] : table) joint += static_cast<long double>(n) * n;
  const long double precision = joint / squares(rows);
  const long double recall = joint / squares(cols);
  return static_cast<double>(2 * precision * recall / (precision + recall));
}

double warping_error(const Grid& pred, const Grid& gt, const WarpConfig& config) {
  const auto r = warp(gt, pred, config);
  return static_cast<double>(r.final_hamming) / static_cast<double>(pred.size());
}

BettiErrorConfig BettiErrorConfig::resolved(const Shape& s) const {
  BettiErrorConfig out = *this;
  if (!out.patch) {
    out.patch = s.rank() == 2 ? Shape(std::min(64, s.height()), std::min(64, s.width()))
                              : Shape(std::min(16, s.depth()), std::min(48, s.height()),
                                      std::min(48, s.width()));
  }
  if (out.dims.empty()) out.dims = s.rank() == 2 ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2};
  return out;
}

double betti_error(const Grid& pred, const Grid& gt, const BettiErrorConfig& config) {
  require_same_shape(pred.shape(), gt.shape(), "betti_error");
  const Shape& s = gt.shape();
  const BettiErrorConfig cfg = config.resolved(s);
  const Shape& patch = *cfg.patch;
  if (cfg.samples < 1) throw ValidationError("betti_error: samples must be >= 1");
  if (patch.rank() != s.rank()) throw ValidationError("betti_error: patch rank differs from grid");
  if (patch.depth() > s.depth() || patch.height() > s.height() || patch.width() > s.width())
    throw ValidationError("betti_error: patch " + patch.to_string() + " larger than grid " +
                          s.to_string());
  for (int d : cfg.dims)
    if (d < 0 || d >= s.rank())
      throw ValidationError("betti_error: Betti dimension " + std::to_string(d) + " out of range for a " +
                            std::to_string(s.rank()) + "D grid");

  std::vector<double> per_sample(static_cast<std::size_t>(cfg.samples));
  parallel_for(per_sample.size(), cfg.threads, [&](std::size_t k) {
    SplitMix64 rng(derive_seed(cfg.seed, k));
    Coord origin;
    origin.z = static_cast<int>(rng.below(static_cast<std::size_t>(s.depth() - patch.depth() + 1)));
    origin.y = static_cast<int>(rng.below(static_cast<std::size_t>(s.height() - patch.height() + 1)));
    origin.x = static_cast<int>(rng.below(static_cast<std::size_t>(s.width() - patch.width() + 1)));
    const BettiProfile a = betti(crop(pred, origin, patch));
    const BettiProfile b = betti(crop(gt, origin, patch));
    const int diff[3] = {std::abs(a.b0 - b.b0), std::abs(a.b1 - b.b1), std::abs(a.b2 - b.b2)};
    double sum = 0;
    for (int d : cfg.dims) sum += diff[d];
    per_sample[k] = sum;
  });
  return pairwise_sum(per_sample) / static_cast<double>(cfg.samples);
}

MetricReport evaluate(const Grid& pred, const Grid& gt, const MetricConfig& config) {
  require_same_shape(pred.shape(), gt.shape(), "evaluate");
  MetricReport r;
  r.warp = config.warp;
  r.betti = config.betti.resolved(gt.shape());
  r.dice = dice_score(pred, gt);
  r.ari = adapted_rand(pred, gt);
  r.warping_error = warping_error(pred, gt, config.warp);
  r.betti_error = betti_error(pred, gt, r.betti);
  return r;
}

MetricReport evaluate(const LikelihoodMap& pred, const Grid& gt, const MetricConfig& config) {
  require_same_shape(pred.shape(), gt.shape(), "evaluate");
  return evaluate(binarize(pred, gt.adjacency()), gt, config);
}

}  // namespace topowarp
