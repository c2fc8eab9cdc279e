#include <doctest.h>

#include <cmath>

#include "ascii.hpp"
#include "oracles.hpp"
#include "topowarp/metrics.hpp"
#include "topowarp/rng.hpp"
#include "topowarp/synthetic.hpp"
#include "topowarp/topology.hpp"

using namespace topowarp;
using testing_util::from_rows;

namespace {

BettiErrorConfig full_patch(const Shape& s, std::vector<int> dims = {}) {
  BettiErrorConfig c;
  c.patch = s;
  c.samples = 3;
  c.dims = std::move(dims);
  return c;
}

}  // namespace

TEST_CASE("identical masks") {
  const auto pair = synthetic::blob_curve_pair(Shape(40, 40), 2);
  const MetricReport r = evaluate(pair.gt, pair.gt);
  CHECK(r.dice == 1.0);
  CHECK(r.ari == 1.0);
  CHECK(r.warping_error == 0.0);
  CHECK(r.betti_error == 0.0);
  CHECK(adapted_rand(Grid(Shape(3, 3)), Grid(Shape(3, 3))) == 1.0);
  CHECK(dice_score(Grid(Shape(3, 3)), Grid(Shape(3, 3))) == 1.0);
}

TEST_CASE("dice") {
  CHECK(dice_score(from_rows({"##..", "...."}), from_rows({"....", "..##"})) == 0.0);
  const Grid p = from_rows({"##..", "...."});
  const Grid g = from_rows({"####", "...."});
  CHECK(dice_score(p, g) == doctest::Approx(2.0 / 3.0));
  CHECK(dice_score(g, p) == dice_score(p, g));
  CHECK_THROWS_AS(dice_score(p, Grid(Shape(2, 5))), ValidationError);
}

TEST_CASE("adapted rand") {
  SUBCASE("a split gt component") {
    const Grid gt = from_rows({"#########"});
    const Grid pred = from_rows({"####.####"});
    CHECK(adapted_rand(pred, gt) == doctest::Approx(2.0 / 3.0));
    CHECK(oracle::pair_count_rand(pred, gt) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("degenerate inputs") {
    const Grid some = from_rows({"#..", "..."});
    const Grid none(Shape(2, 3));
    CHECK(adapted_rand(some, none) == 0.0);
    CHECK(adapted_rand(none, some) == 0.0);
    CHECK(adapted_rand(some, from_rows({"..#", "..."})) == 0.0);
  }
  SUBCASE("pair-counting oracle") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      SplitMix64 rng(seed);
      const Shape s(1 + static_cast<int>(rng.below(12)), 1 + static_cast<int>(rng.below(12)));
      const Grid a = synthetic::random_grid(s, rng.unit(), rng);
      const Grid b = synthetic::random_grid(s, rng.unit(), rng);
      const double v = adapted_rand(a, b);
      INFO("seed=" << seed);
      REQUIRE(v == doctest::Approx(oracle::pair_count_rand(a, b)).epsilon(1e-12));
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("warping error") {
  Grid g(Shape(7, 7));
  Grid f(Shape(7, 7));
  for (int x = 0; x < 7; ++x) {
    g.set(Coord{3, x}, true);
    if (x < 2 || x > 4) f.set(Coord{3, x}, true);
  }
  CHECK(warping_error(f, g) == doctest::Approx(3.0 / 49.0));
  CHECK(warping_error(g, g) == 0.0);

  Grid blob(Shape(24, 24));
  Grid dilated(Shape(24, 24));
  synthetic::stamp_ball(blob, 0, 11.5, 11.5, 5.0);
  synthetic::stamp_ball(dilated, 0, 11.5, 11.5, 8.0);
  CHECK(warping_error(blob, dilated, WarpConfig::converge()) == 0.0);
  CHECK(warping_error(dilated, blob, WarpConfig::converge()) == 0.0);
}

TEST_CASE("betti error") {
  Grid gt(Shape(20, 20));
  synthetic::stamp_ball(gt, 0, 9, 9, 5);
  Grid pred = gt;
  pred.set(Coord{1, 18}, true);
  CHECK(betti_error(pred, gt, full_patch(gt.shape(), {0})) == 1.0);
  CHECK(betti_error(pred, gt, full_patch(gt.shape(), {1})) == 0.0);
  CHECK(betti_error(gt, gt) == 0.0);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Shape s = seed % 2 ? Shape(6, 14, 14) : Shape(32, 32);
    const auto pair = synthetic::blob_curve_pair(s, seed);
    const BettiProfile a = betti(pair.pred);
    const BettiProfile b = betti(pair.gt);
    const double expected = std::abs(a.b0 - b.b0) + std::abs(a.b1 - b.b1);
    REQUIRE(betti_error(pair.pred, pair.gt, full_patch(s, {0, 1})) == expected);
    if (s.rank() == 3)
      REQUIRE(betti_error(pair.pred, pair.gt, full_patch(s)) == expected + std::abs(a.b2 - b.b2));
  }
}

TEST_CASE("betti error sampling is reproducible") {
  const auto pair = synthetic::blob_curve_pair(Shape(96, 96), 4);
  BettiErrorConfig c;
  c.patch = Shape(24, 24);
  c.samples = 50;
  c.seed = 77;
  const double one = betti_error(pair.pred, pair.gt, c);
  CHECK(one > 0.0);
  for (unsigned t : {2u, 3u, 8u}) {
    c.threads = t;
    CHECK(betti_error(pair.pred, pair.gt, c) == one);
  }
  c.seed = 78;
  c.threads = 1;
  CHECK(std::isfinite(betti_error(pair.pred, pair.gt, c)));

  BettiErrorConfig big;
  big.patch = Shape(97, 10);
  CHECK_THROWS_AS(betti_error(pair.pred, pair.gt, big), ValidationError);
  BettiErrorConfig none;
  none.samples = 0;
  CHECK_THROWS_AS(betti_error(pair.pred, pair.gt, none), ValidationError);
  BettiErrorConfig bad_dim;
  bad_dim.dims = {2};
  CHECK_THROWS_AS(betti_error(pair.pred, pair.gt, bad_dim), ValidationError);
}

TEST_CASE("defaults resolve against the grid") {
  const BettiErrorConfig r2 = BettiErrorConfig{}.resolved(Shape(100, 200));
  CHECK(*r2.patch == Shape(64, 64));
  CHECK(r2.dims == std::vector<int>{0, 1});
  const BettiErrorConfig small = BettiErrorConfig{}.resolved(Shape(30, 200));
  CHECK(*small.patch == Shape(30, 64));
  const BettiErrorConfig r3 = BettiErrorConfig{}.resolved(Shape(40, 100, 100));
  CHECK(*r3.patch == Shape(16, 48, 48));
  CHECK(r3.dims == std::vector<int>{0, 1, 2});
}

TEST_CASE("evaluate echoes settings and is repeatable") {
  const auto pair = synthetic::blob_curve_pair(Shape(80, 80), 8);
  MetricConfig cfg;
  cfg.betti.seed = 5;
  cfg.betti.samples = 20;
  cfg.warp.metric = Metric::Chessboard;
  const MetricReport a = evaluate(pair.pred, pair.gt, cfg);
  const MetricReport b = evaluate(pair.pred, pair.gt, cfg);
  CHECK(a.dice == b.dice);
  CHECK(a.ari == b.ari);
  CHECK(a.warping_error == b.warping_error);
  CHECK(a.betti_error == b.betti_error);
  CHECK(a.betti.seed == 5);
  CHECK(a.betti.samples == 20);
  CHECK(*a.betti.patch == Shape(64, 64));
  CHECK(a.warp.metric == Metric::Chessboard);
  CHECK(a.warping_error == warping_error(pair.pred, pair.gt, cfg.warp));

  std::vector<double> v(pair.pred.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = pair.pred[i] ? 0.9 : 0.1;
  const MetricReport c = evaluate(LikelihoodMap(pair.pred.shape(), v), pair.gt, cfg);
  CHECK(c.dice == a.dice);
  CHECK(c.betti_error == a.betti_error);
}
