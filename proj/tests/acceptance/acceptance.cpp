// Acceptance run: one PASS/FAIL line per criterion, details indented below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "topowarp/distance.hpp"
#include "topowarp/io.hpp"
#include "topowarp/loss.hpp"
#include "topowarp/metrics.hpp"
#include "topowarp/rng.hpp"
#include "topowarp/simple_point.hpp"
#include "topowarp/synthetic.hpp"
#include "topowarp/topology.hpp"
#include "topowarp/warp.hpp"

using namespace topowarp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Adjacency k48 = Adjacency::with_fg(Connectivity::N4, 2);
const Adjacency k84 = Adjacency::with_fg(Connectivity::N8, 2);
const Adjacency k626 = Adjacency::with_fg(Connectivity::N6, 3);
const Adjacency k266 = Adjacency::with_fg(Connectivity::N26, 3);

bool betti_preserved(const Grid& g, const Coord& c) {
  Grid f = g;
  f.flip(g.shape().index(c));
  return oracle::betti_cubical(g) == oracle::betti_cubical(f);
}

// 1. Every 3x3 configuration, both 2D adjacency pairs.
Outcome simple_2d_exhaustive() {
  const auto t0 = Clock::now();
  Outcome o;
  int agree = 0, total = 0;
  for (const auto& adj : {k48, k84}) {
    int per_adj = 0;
    for (std::uint32_t ring = 0; ring < 256; ++ring)
      for (bool center : {false, true}) {
        Grid g(Shape(5, 5), adj);
        int k = 0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!dy && !dx) continue;
            g.set(Coord{2 + dy, 2 + dx}, (ring >> k++) & 1u);
          }
        g.set(Coord{2, 2}, center);
        const bool ok = is_simple_at(g, Coord{2, 2}) == betti_preserved(g, Coord{2, 2});
        agree += ok;
        per_adj += ok;
        ++total;
      }
    o.notes.push_back(fmt("fg=%s: %d/512 agree", to_string(adj.fg()), per_adj));
  }
  const double t = seconds_since(t0);
  o.pass = agree == total && t < 1.0;
  o.summary = fmt("2D simple test vs Betti oracle, exhaustive: %d/%d agree in %.3f s", agree, total, t);
  return o;
}

// 2. Random 3x3x3 neighbourhoods in a BG 5x5x5 volume.
Outcome simple_3d_sampled() {
  const auto t0 = Clock::now();
  Outcome o;
  constexpr int kSamples = 100000;
  SplitMix64 rng(2024);
  int agree = 0, link_agree = 0, local_simple_betti_changed = 0, betti_blind = 0, blind_link_noncontractible = 0;
  for (int trial = 0; trial < kSamples; ++trial) {
    const auto& adj = trial % 2 ? k266 : k626;
    Grid g(Shape(5, 5, 5), adj);
    std::uint8_t cube[3][3][3];
    const double density = rng.unit();
    for (int z = 1; z <= 3; ++z)
      for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) {
          const bool v = rng.unit() < density;
          g.set(Coord{z, y, x}, v);
          cube[z - 1][y - 1][x - 1] = v;
        }
    const Coord c{2, 2, 2};
    const bool local = is_simple_at(g, c);
    const bool betti = betti_preserved(g, c);
    // The link test treats the center as FG; complementing swaps the roles.
    std::uint8_t as_fg[3][3][3];
    const bool center_fg = cube[1][1][1];
    for (int z = 0; z < 3; ++z)
      for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) as_fg[z][y][x] = center_fg ? cube[z][y][x] : !cube[z][y][x];
    as_fg[1][1][1] = 1;
    const bool link = oracle::link_contractible_3d(as_fg, center_fg ? adj.fg_is_face() : !adj.fg_is_face());
    agree += local == betti;
    link_agree += local == link;
    local_simple_betti_changed += local && !betti;
    if (!local && betti) {
      ++betti_blind;
      blind_link_noncontractible += !link;
    }
  }
  const double t = seconds_since(t0);
  o.pass = agree == kSamples && t < 60.0;
  o.summary = fmt("3D simple test vs Betti oracle, %d samples: %d agree (%.3f%%) in %.1f s", kSamples, agree,
                  100.0 * agree / kSamples, t);
  o.notes.push_back(fmt("simple but Betti numbers changed: %d", local_simple_betti_changed));
  o.notes.push_back(fmt("non-simple but Betti numbers preserved: %d, of which %d have a non-contractible link",
                        betti_blind, blind_link_noncontractible));
  o.notes.push_back(fmt("agreement with the link-contractibility oracle: %d/%d", link_agree, kSamples));
  return o;
}

// 3. Cells with CityBlock distance > 1 must be non-simple.
Outcome distance_bound() {
  Outcome o;
  SplitMix64 rng(77);
  std::size_t far_cells = 0, simple_fg = 0, simple_bg = 0, bg_far = 0, fg_far = 0;
  int violating_masks = 0;
  for (int m = 0; m < 1000; ++m) {
    Grid g = m % 2 ? synthetic::random_grid(Shape(64, 64), 0.2 + 0.6 * rng.unit(), rng)
                   : synthetic::blob_curve_pair(Shape(64, 64), 5000 + m).gt;
    const DistanceField d = distance_transform(g, Metric::CityBlock);
    bool bad = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (d.values[i] <= 1) continue;
      ++far_cells;
      (g[i] ? fg_far : bg_far) += 1;
      if (is_simple_at(g, g.shape().coord(i))) {
        bad = true;
        (g[i] ? simple_fg : simple_bg) += 1;
      }
    }
    violating_masks += bad;
  }
  o.pass = simple_fg + simple_bg == 0;
  o.summary = fmt("1000 masks 64x64, %zu cells at CityBlock distance > 1: %zu classified simple", far_cells,
                  simple_fg + simple_bg);
  o.notes.push_back(fmt("BG cells at distance > 1: %zu, simple: %zu", bg_far, simple_bg));
  o.notes.push_back(fmt("FG cells at distance > 1: %zu, simple: %zu (in %d masks)", fg_far, simple_fg, violating_masks));
  if (simple_fg) {
    // Smallest witness: plus-shaped FG cell with one BG diagonal.
    Grid w(Shape(5, 5));
    for (auto [y, x] : {std::pair{1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}}) w.set(Coord{y, x}, true);
    const auto d = distance_transform(w, Metric::CityBlock);
    o.notes.push_back(fmt("witness: FG cell (2,2) of rows .....|..##.|.###.|.###.|..... has distance %d, simple=%d, "
                          "Betti oracle preserved=%d",
                          d.values[w.shape().index(Coord{2, 2})], is_simple_at(w, Coord{2, 2}),
                          betti_preserved(w, Coord{2, 2})));
  }
  return o;
}

std::vector<WarpConfig> all_configs() {
  std::vector<WarpConfig> out;
  for (auto m : {Metric::CityBlock, Metric::Chessboard, Metric::EuclideanSquared}) {
    WarpConfig c;
    c.metric = m;
    out.push_back(c);
    c.passes = 3;
    out.push_back(c);
    c.recompute_distance_each_pass = true;
    out.push_back(c);
    out.push_back(WarpConfig::converge(m));
  }
  return out;
}

// 4 and 5 share the same runs.
std::pair<Outcome, Outcome> warp_invariants() {
  Outcome homotopy, hamming_out;
  const auto configs = all_configs();
  std::size_t runs = 0, betti_ok = 0, hamming_ok = 0;
  for (int k = 0; k < 500; ++k) {
    const Shape shape = k % 2 ? Shape(8, 32, 32) : Shape(64, 64);
    const auto pair = synthetic::blob_curve_pair(shape, 9000 + k);
    for (int dir = 0; dir < 2; ++dir) {
      const Grid& s = dir ? pair.gt : pair.pred;
      const Grid& t = dir ? pair.pred : pair.gt;
      const auto expect = oracle::betti_cubical(s);
      const std::size_t initial = oracle::naive_hamming(s, t);
      for (const auto& cfg : configs) {
        const WarpResult r = warp(s, t, cfg);
        ++runs;
        betti_ok += oracle::betti_cubical(r.warped) == expect;
        hamming_ok += r.initial_hamming == initial && r.final_hamming == initial - r.flips.size() &&
                      r.final_hamming <= initial && oracle::naive_hamming(r.warped, t) == r.final_hamming;
      }
    }
  }
  homotopy.pass = betti_ok == runs;
  homotopy.summary = fmt("500 pairs (64x64, 8x32x32), %zu configs, both directions: %zu/%zu warps keep Betti numbers",
                         configs.size(), betti_ok, runs);
  hamming_out.pass = hamming_ok == runs;
  hamming_out.summary = fmt("final = initial - flips and final <= initial on %zu/%zu warps", hamming_ok, runs);
  return {homotopy, hamming_out};
}

// No 2x2 block entirely inside the mask.
bool one_cell_wide(const Grid& g) {
  for (int y = 0; y + 1 < g.shape().height(); ++y)
    for (int x = 0; x + 1 < g.shape().width(); ++x)
      if (g.at(Coord{y, x}) && g.at(Coord{y + 1, x}) && g.at(Coord{y, x + 1}) && g.at(Coord{y + 1, x + 1}))
        return false;
  return true;
}

std::size_t count_in(const Grid& g, int y0, int y1, int x0, int x1) {
  std::size_t n = 0;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) n += g.at(Coord{y, x});
  return n;
}

// 6. Broken line and a thick bar with a gap and a hanging blob.
Outcome behaviour_replica() {
  Outcome o;
  Grid gt(Shape(7, 7)), pred(Shape(7, 7));
  for (int x = 0; x < 7; ++x) {
    gt.set(Coord{3, x}, true);
    if (x < 2 || x > 4) pred.set(Coord{3, x}, true);
  }
  const CriticalMask line = critical_mask(pred, gt);
  const bool line_ok = line.from_pred_warp.count() == 1 && line.from_pred_warp.at(Coord{3, 3}) &&
                       line.from_gt_warp.count() == 3 && count_in(line.from_gt_warp, 3, 4, 2, 5) == 3;
  o.notes.push_back(fmt("7x7 line: M_f=%zu cell(s) (middle of gap: %d), M_g=%zu cells", line.from_pred_warp.count(),
                        line.from_pred_warp.at(Coord{3, 3}), line.from_gt_warp.count()));

  Grid white(Shape(30, 60)), red(Shape(30, 60));
  for (int y = 10; y < 20; ++y)
    for (int x = 5; x < 55; ++x) {
      white.set(Coord{y, x}, true);
      if (x < 28 || x > 31) red.set(Coord{y, x}, true);
    }
  for (int y = 20; y < 28; ++y)
    for (int x = 5; x < 21; ++x) red.set(Coord{y, x}, true);

  const auto check = [&](const WarpConfig& cfg, const char* label) {
    const CriticalMask m = critical_mask(red, white, cfg);
    const std::size_t prot = count_in(m.mask, 20, 28, 5, 21);
    const bool thin = one_cell_wide(m.from_gt_warp) && one_cell_wide(m.from_pred_warp);
    o.notes.push_back(fmt("replica (%s): M_g=%zu, M_f=%zu, M=%zu, protrusion cells=%zu, one cell wide=%d", label,
                          m.from_gt_warp.count(), m.from_pred_warp.count(), m.mask.count(), prot, thin));
    return prot == 0 && thin && !m.mask.empty();
  };
  const bool replica_ok = check(WarpConfig::converge(), "until no flip");
  check(WarpConfig{}, "single pass, diagnostic only");
  o.pass = line_ok && replica_ok;
  o.summary = fmt("7x7 line %s, thick-blob replica %s", line_ok ? "matches" : "differs",
                  replica_ok ? "thin residual with protrusion ignored" : "not reproduced");
  return o;
}

// 7. Ordered against naive on 512x512 road-like pairs.
Outcome ordering_speed() {
  Outcome o;
  double worst_ratio = 1e300, worst_ordered = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pair = synthetic::road_pair(512, seed);
    double t_ordered = 1e300, t_naive = 1e300;
    WarpResult ordered, naive;
    for (int rep = 0; rep < 3; ++rep) {
      auto t0 = Clock::now();
      ordered = warp(pair.pred, pair.gt);
      t_ordered = std::min(t_ordered, seconds_since(t0));
      t0 = Clock::now();
      naive = naive_warp(pair.pred, pair.gt);
      t_naive = std::min(t_naive, seconds_since(t0));
    }
    worst_ratio = std::min(worst_ratio, t_naive / t_ordered);
    worst_ordered = std::max(worst_ordered, t_ordered);
    o.notes.push_back(fmt("seed %llu: ordered %.4f s, naive %.4f s (%d passes), ratio %.2f, differing cells %zu, "
                          "final %zu vs %zu",
                          static_cast<unsigned long long>(seed), t_ordered, t_naive,
                          naive.flips.empty() ? 0 : naive.flips.back().pass + 1, t_naive / t_ordered,
                          ordered.initial_hamming, ordered.final_hamming, naive.final_hamming));
  }
  o.pass = worst_ratio >= 3.0 && worst_ordered <= 0.5;
  o.summary = fmt("512x512 road pairs: worst naive/ordered ratio %.2f (need >= 3), slowest ordered %.4f s (need <= 0.5)",
                  worst_ratio, worst_ordered);
  return o;
}

LikelihoodMap random_map(const Shape& s, SplitMix64& rng) {
  std::vector<double> v(s.size());
  for (auto& x : v) {
    x = 0.02 + 0.46 * rng.unit();
    if (rng.unit() < 0.5) x = 1.0 - x;
  }
  return LikelihoodMap(s, std::move(v));
}

// 8. Central differences on 16x16 instances.
Outcome gradients() {
  Outcome o;
  constexpr double h = 1e-5;
  std::size_t checked = 0, bad = 0;
  double worst = 0;
  const Shape s(16, 16);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SplitMix64 rng(seed + 300);
    const LikelihoodMap f = random_map(s, rng);
    const Grid g = seed % 2 ? synthetic::random_grid(s, 0.4, rng) : synthetic::blob_curve_pair(s, seed).gt;
    const CriticalMask m = critical_mask(binarize(f), g);
    for (auto p : {PixelLoss::CrossEntropy, PixelLoss::MeanSquaredError, PixelLoss::SoftDice})
      for (auto red : {Reduction::Mean, Reduction::Sum}) {
        LossConfig cfg;
        cfg.pixel_loss = p;
        cfg.reduction = red;
        const auto grad = warping_loss(f, g, m, cfg).gradient;
        for (std::size_t i = 0; i < f.size(); ++i) {
          std::vector<double> up(f.values().begin(), f.values().end()), dn = up;
          up[i] += h;
          dn[i] -= h;
          const double numeric = (warping_loss(LikelihoodMap(s, up), g, m, cfg).value -
                                  warping_loss(LikelihoodMap(s, dn), g, m, cfg).value) /
                                 (2 * h);
          if (std::abs(grad[i]) <= 1e-6 && std::abs(numeric) <= 1e-6) continue;
          ++checked;
          const double rel = std::abs(grad[i] - numeric) / std::max(std::abs(grad[i]), std::abs(numeric));
          worst = std::max(worst, rel);
          bad += rel > 1e-4;
        }
      }
  }
  o.pass = bad == 0 && checked > 0;
  o.summary = fmt("50 instances x CE/MSE/SoftDice x mean/sum: %zu cells checked, %zu over 1e-4, worst %.2e", checked,
                  bad, worst);
  return o;
}

// 9. Metric identities and brute-force oracles.
Outcome metric_oracles() {
  Outcome o;
  int identity_ok = 0;
  for (int k = 0; k < 20; ++k) {
    const Grid g = synthetic::blob_curve_pair(k % 2 ? Shape(4, 20, 20) : Shape(40, 40), 700 + k).gt;
    const MetricReport r = evaluate(g, g);
    identity_ok += r.dice == 1.0 && r.ari == 1.0 && r.warping_error == 0.0 && r.betti_error == 0.0;
  }
  int ari_ok = 0;
  SplitMix64 rng(99);
  for (int k = 0; k < 1000; ++k) {
    const Shape s(1 + static_cast<int>(rng.below(12)), 1 + static_cast<int>(rng.below(12)));
    const auto adj = k % 2 ? k84 : k48;
    const Grid a = synthetic::random_grid(s, rng.unit(), rng).with_adjacency(adj);
    const Grid b = synthetic::random_grid(s, rng.unit(), rng).with_adjacency(adj);
    ari_ok += std::abs(adapted_rand(a, b) - oracle::pair_count_rand(a, b)) <= 1e-12;
  }
  int dt_ok = 0;
  for (int k = 0; k < 200; ++k) {
    const Grid g = synthetic::random_grid(Shape(32, 32), 0.05 + 0.9 * rng.unit(), rng);
    bool all = true;
    for (auto m : {Metric::CityBlock, Metric::Chessboard, Metric::EuclideanSquared})
      all = all && distance_transform(g, m).values == oracle::brute_distance(g, m);
    dt_ok += all;
  }
  o.pass = identity_ok == 20 && ari_ok == 1000 && dt_ok == 200;
  o.summary = fmt("identity %d/20, adapted Rand vs pair counting %d/1000, distance transform vs brute force %d/200",
                  identity_ok, ari_ok, dt_ok);
  return o;
}

// 10. Same command line, different thread caps, identical files.
Outcome cli_determinism(const std::string& cli) {
  Outcome o;
  testing_util::TempDir dir("topowarp_accept_");
  const auto pair2 = synthetic::road_pair(96, 5);
  const auto pair3 = synthetic::blob_curve_pair(Shape(4, 24, 24), 6);
  io::save_mask(pair2.pred, dir / "pred.png");
  io::save_mask(pair2.gt, dir / "gt.png");
  io::save_mask(pair3.pred, dir / "pred3.npy");
  io::save_mask(pair3.gt, dir / "gt3.npy");
  std::vector<double> f(pair2.pred.size());
  SplitMix64 rng(12);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = pair2.pred[i] ? 0.5 + 0.5 * rng.unit() : 0.5 * rng.unit();
  io::save_likelihood(LikelihoodMap(pair2.pred.shape(), f), dir / "f.npy");
  const auto p = [&](const char* n) { return (dir / n).string(); };
  const std::string out = p("out");

  const std::vector<std::vector<std::string>> commands = {
      {"simple-check", "--mask", p("gt.png"), "--out-dir", out},
      {"warp", "--source", p("pred.png"), "--target", p("gt.png"), "--tie", "random", "--seed", "3", "--out-dir", out},
      {"warp", "--source", p("pred3.npy"), "--target", p("gt3.npy"), "--metric", "euclidean", "--passes", "4",
       "--recompute-dt", "--out-dir", out},
      {"critical", "--pred", p("f.npy"), "--gt", p("gt.png"), "--out-dir", out},
      {"critical", "--pred", p("pred3.npy"), "--gt", p("gt3.npy"), "--out-dir", out},
      {"loss", "--likelihood", p("f.npy"), "--gt", p("gt.png"), "--pixel-loss", "dice", "--out-dir", out},
      {"metrics", "--pred", p("pred.png"), "--gt", p("gt.png"), "--pred", p("f.npy"), "--gt", p("gt.png"), "--pred",
       p("pred3.npy"), "--gt", p("gt3.npy"), "--samples", "40", "--seed", "8", "--out-dir", out},
  };

  const auto snapshot = [&](const std::string& command) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(out)) {
      const std::string name = e.path().filename().string();
      std::string bytes = testing_util::read_file(e.path());
      if (name == command + ".manifest.json") {
        auto j = nlohmann::json::parse(bytes);
        j.erase("timings");
        bytes = j.dump();
      }
      files[name] = bytes;
    }
    return files;
  };

  int identical = 0;
  for (const auto& args : commands) {
    std::map<std::string, std::string> first;
    bool same = true;
    for (const char* threads : {"TOPOWARP_THREADS=1", "TOPOWARP_THREADS=3", "TOPOWARP_THREADS=1"}) {
      fs::remove_all(out);
      const auto r = testing_util::run_cli(cli, args, dir.path, {threads});
      if (r.exit_code != 0) {
        same = false;
        o.notes.push_back(args[0] + " exited with " + std::to_string(r.exit_code) + ": " + r.err);
        break;
      }
      auto files = snapshot(args[0]);
      files[".stdout"] = r.out;
      if (first.empty())
        first = std::move(files);
      else
        same = same && files == first;
    }
    identical += same;
    if (!same) o.notes.push_back(args[0] + ": outputs differ between runs");
  }
  o.pass = identical == static_cast<int>(commands.size());
  o.summary = fmt("%d/%zu command lines byte-identical across 3 runs with thread caps 1,3,1 (manifest timings excluded)",
                  identical, commands.size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::optional<std::pair<Outcome, Outcome>> warps;
  const auto shared_warps = [&]() -> const std::pair<Outcome, Outcome>& {
    if (!warps) warps = warp_invariants();
    return *warps;
  };
  const std::vector<std::function<Outcome()>> criteria = {
      simple_2d_exhaustive,
      simple_3d_sampled,
      distance_bound,
      [&] { return shared_warps().first; },
      [&] { return shared_warps().second; },
      behaviour_replica,
      ordering_speed,
      gradients,
      metric_oracles,
      [&] { return cli.empty() ? Outcome{false, "no CLI binary given", {}} : cli_determinism(cli); },
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    const Outcome o = criteria[k]();
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s  [%.2f s]\n", k + 1, o.pass ? "PASS" : "FAIL", o.summary.c_str(),
                seconds_since(t0));
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
