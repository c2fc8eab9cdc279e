#pragma once

#include <cstdint>
#include <vector>

#include "topowarp/distance.hpp"
#include "topowarp/grid.hpp"

namespace topowarp {

/// How candidates at equal distance are ordered.
struct TieBreak {
  enum class Kind : std::uint8_t { RowMajor, Random };

  Kind kind = Kind::RowMajor;
  std::uint64_t seed = 0;

  static TieBreak row_major() { return {}; }
  static TieBreak random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

struct WarpConfig {
  Metric metric = Metric::CityBlock;
  /// Maximum number of rounds over the remaining candidates (>= 1). Rounds
  /// stop early once one of them flips nothing.
  int passes = 1;
  /// Recompute the distance transform on the warped mask between rounds.
  bool recompute_distance_each_pass = false;
  TieBreak tie_break;

  /// Rounds until no flip, recomputing distances each round.
  static WarpConfig converge(Metric metric = Metric::CityBlock);
  void validate() const;
};

struct Flip {
  Coord coord;
  int pass = 0;

  friend bool operator==(const Flip&, const Flip&) = default;
};

struct WarpResult {
  Grid warped;
  std::vector<Flip> flips;
  /// Cells where `warped` still disagrees with the target.
  Grid residual;
  std::size_t initial_hamming = 0;
  std::size_t final_hamming = 0;
};

/// Distance-ordered homotopic warp of `source` toward `target`.
///
/// Candidates are the cells where the masks disagree. They are visited in
/// non-decreasing order of the source's distance transform and each one is
/// flipped iff it is simple in the evolving mask at that moment, so every
/// flip lowers the Hamming distance by one and the warped mask keeps the
/// source's topology. Both grids must share shape and adjacency.
WarpResult warp(const Grid& source, const Grid& target, const WarpConfig& config = {});

/// Baseline without distance ordering: rescan the remaining difference set
/// in row-major order, flipping simple cells, until a scan flips nothing.
WarpResult naive_warp(const Grid& source, const Grid& target);

struct CriticalMask {
  Grid mask;            // from_gt_warp OR from_pred_warp
  Grid from_gt_warp;    // pred XOR warp(gt -> pred)
  Grid from_pred_warp;  // gt XOR warp(pred -> gt)
};

CriticalMask critical_mask(const Grid& pred_binary, const Grid& gt, const WarpConfig& config = {});

}  // namespace topowarp
