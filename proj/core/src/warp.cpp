#include "topowarp/warp.hpp"

#include <algorithm>
#include <numeric>

#include "topowarp/rng.hpp"
#include "topowarp/simple_point.hpp"
#include "topowarp/topology.hpp"

namespace topowarp {

WarpConfig WarpConfig::converge(Metric metric) {
  WarpConfig c;
  c.metric = metric;
  c.passes = 1 << 20;
  c.recompute_distance_each_pass = true;
  return c;
}

void WarpConfig::validate() const {
  if (passes < 1) throw ValidationError("warp: passes must be >= 1");
}

namespace {

void require_compatible(const Grid& source, const Grid& target, const char* what) {
  require_same_shape(source.shape(), target.shape(), what);
  if (!(source.adjacency() == target.adjacency()))
    throw ValidationError(std::string(what) + ": source and target use different adjacency");
}

std::vector<std::uint32_t> difference_set(const Grid& a, const Grid& b) {
  std::vector<std::uint32_t> out;
  const auto ca = a.cells();
  const auto cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (ca[i] != cb[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

// Stable sort of `cells` by distance; counting sort when the key range is small.
void sort_by_distance(std::vector<std::uint32_t>& cells, const DistanceField& d) {
  if (cells.size() < 2) return;
  std::int64_t max_finite = 0;
  for (auto i : cells)
    if (d.values[i] != DistanceField::kInfinite)
      max_finite = std::max<std::int64_t>(max_finite, d.values[i]);
  const auto key = [&](std::uint32_t i) -> std::int64_t {
    return d.values[i] == DistanceField::kInfinite ? max_finite + 1 : d.values[i];
  };
  const std::int64_t range = max_finite + 2;
  if (range > 4 * static_cast<std::int64_t>(cells.size()) + 1024) {
    std::stable_sort(cells.begin(), cells.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    return;
  }
  std::vector<std::size_t> bucket(static_cast<std::size_t>(range) + 1, 0);
  for (auto i : cells) ++bucket[static_cast<std::size_t>(key(i)) + 1];
  std::partial_sum(bucket.begin(), bucket.end(), bucket.begin());
  std::vector<std::uint32_t> out(cells.size());
  for (auto i : cells) out[bucket[static_cast<std::size_t>(key(i))]++] = i;
  cells.swap(out);
}

class SimpleTester {
 public:
  explicit SimpleTester(const Grid& g) : fg_face_(g.adjacency().fg_is_face()), planar_(g.rank() == 2) {}

  bool operator()(const Grid& g, std::uint32_t i) const {
    const Coord c = g.shape().coord(i);
    if (planar_) return detail::simple_2d_lookup(detail::ring_bits_2d(g, c.y, c.x), fg_face_);
    return is_simple_3d(extract_patch(g, c), g.adjacency());
  }

 private:
  bool fg_face_;
  bool planar_;
};

WarpResult finish(Grid work, std::vector<Flip> flips, const Grid& target, std::size_t initial) {
  WarpResult r;
  r.residual = xor_mask(target, work);
  r.final_hamming = r.residual.count();
  r.warped = std::move(work);
  r.flips = std::move(flips);
  r.initial_hamming = initial;
  return r;
}

}  // namespace

WarpResult warp(const Grid& source, const Grid& target, const WarpConfig& config) {
  config.validate();
  require_compatible(source, target, "warp");

  Grid work = source;
  std::vector<std::uint32_t> remaining = difference_set(source, target);
  const std::size_t initial = remaining.size();
  std::vector<Flip> flips;
  const SimpleTester simple(source);
  SplitMix64 rng(config.tie_break.seed);
  const bool shuffle = config.tie_break.kind == TieBreak::Kind::Random;

  const auto order = [&](const Grid& reference) {
    if (shuffle) {
      for (std::size_t k = remaining.size(); k > 1; --k)
        std::swap(remaining[k - 1], remaining[rng.below(k)]);
    } else {
      std::sort(remaining.begin(), remaining.end());
    }
    sort_by_distance(remaining, distance_transform(reference, config.metric));
  };

  order(source);
  std::vector<std::uint32_t> skipped;
  for (int pass = 0; pass < config.passes && !remaining.empty(); ++pass) {
    if (pass > 0 && config.recompute_distance_each_pass) order(work);
    skipped.clear();
    const std::size_t before = flips.size();
    for (auto i : remaining) {
      if (simple(work, i)) {
        work.flip(i);
        flips.push_back({source.shape().coord(i), pass});
      } else {
        skipped.push_back(i);
      }
    }
    remaining.swap(skipped);
    if (flips.size() == before) break;
  }
  return finish(std::move(work), std::move(flips), target, initial);
}

WarpResult naive_warp(const Grid& source, const Grid& target) {
  require_compatible(source, target, "naive_warp");

  Grid work = source;
  std::vector<std::uint32_t> remaining = difference_set(source, target);
  const std::size_t initial = remaining.size();
  std::vector<Flip> flips;
  const SimpleTester simple(source);
  std::vector<std::uint32_t> skipped;
  for (int pass = 0; !remaining.empty(); ++pass) {
    skipped.clear();
    const std::size_t before = flips.size();
    for (auto i : remaining) {
      if (simple(work, i)) {
        work.flip(i);
        flips.push_back({source.shape().coord(i), pass});
      } else {
        skipped.push_back(i);
      }
    }
    remaining.swap(skipped);
    if (flips.size() == before) break;
  }
  return finish(std::move(work), std::move(flips), target, initial);
}

CriticalMask critical_mask(const Grid& pred_binary, const Grid& gt, const WarpConfig& config) {
  CriticalMask out;
  out.from_gt_warp = warp(gt, pred_binary, config).residual;
  out.from_pred_warp = warp(pred_binary, gt, config).residual;
  std::vector<std::uint8_t> both(gt.size());
  const auto a = out.from_gt_warp.cells();
  const auto b = out.from_pred_warp.cells();
  for (std::size_t i = 0; i < both.size(); ++i) both[i] = a[i] | b[i];
  out.mask = Grid(gt.shape(), std::move(both), gt.adjacency());
  return out;
}

}  // namespace topowarp
