#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "topowarp/grid.hpp"
#include "topowarp/loss.hpp"
#include "topowarp/warp.hpp"

namespace topowarp {

/// 2|P & G| / (|P| + |G|); 1 when both masks are empty.
double dice_score(const Grid& pred, const Grid& gt);

/// Rand F-score between the FG component labelings of the two masks,
/// restricted to cells that are FG in both. Rows of the contingency table
/// are pred components, columns gt components:
///   precision = sum c_ij^2 / sum_i (row_i)^2
///   recall    = sum c_ij^2 / sum_j (col_j)^2
/// 1 when both masks are empty, 0 when only one is or they do not overlap.
double adapted_rand(const Grid& pred, const Grid& gt);

/// |pred XOR warp(gt -> pred)| / cell count.
double warping_error(const Grid& pred, const Grid& gt, const WarpConfig& config = {});

struct BettiErrorConfig {
  /// Patch extents in C order. Unset: 64x64 in 2D, 16x48x48 (DxHxW) in 3D,
  /// each clipped to the grid.
  std::optional<Shape> patch;
  int samples = 100;
  /// Betti dimensions compared. Empty: {0, 1} in 2D, {0, 1, 2} in 3D.
  std::vector<int> dims;
  std::uint64_t seed = 0;
  /// Worker threads for patch sampling; the result does not depend on it.
  unsigned threads = 1;

  /// Patch and dims with defaults applied for `grid_shape`.
  BettiErrorConfig resolved(const Shape& grid_shape) const;
};

/// Mean over `samples` random aligned patches of sum_k |b_k(pred) - b_k(gt)|.
double betti_error(const Grid& pred, const Grid& gt, const BettiErrorConfig& config = {});

struct MetricConfig {
  WarpConfig warp;
  BettiErrorConfig betti;
};

struct MetricReport {
  double dice = 0.0;
  double ari = 0.0;
  double warping_error = 0.0;
  double betti_error = 0.0;
  /// Echo of the settings that produced the numbers (defaults resolved).
  WarpConfig warp;
  BettiErrorConfig betti;
};

MetricReport evaluate(const Grid& pred, const Grid& gt, const MetricConfig& config = {});
/// Binarizes `pred` with the gt's adjacency first.
MetricReport evaluate(const LikelihoodMap& pred, const Grid& gt, const MetricConfig& config = {});

}  // namespace topowarp
