#pragma once

#include <cstdint>
#include <vector>

#include "topowarp/grid.hpp"

namespace topowarp {

/// Per-cell component ids: 0 for cells outside the labeled set, 1..count
/// otherwise, numbered by first visit in row-major order.
struct ComponentLabeling {
  std::vector<std::int32_t> labels;
  int count = 0;
};

/// Betti numbers of the FG set. b2 is always 0 in 2D.
struct BettiProfile {
  int b0 = 0;
  int b1 = 0;
  int b2 = 0;
  long euler = 0;

  friend bool operator==(const BettiProfile&, const BettiProfile&) = default;
};

ComponentLabeling connected_components(const Grid& grid, Label set, Connectivity adjacency);

/// Euler characteristic of the cubical complex the FG cells induce under
/// the grid's FG adjacency. Face adjacency (4/6) treats cells as vertices
/// joined by edges, squares and cubes; full adjacency (8/26) treats each
/// cell as a closed unit square/cube.
long euler_characteristic(const Grid& grid);

BettiProfile betti(const Grid& grid);

/// Cellwise XOR; the result inherits `a`'s adjacency.
Grid xor_mask(const Grid& a, const Grid& b);

std::size_t hamming(const Grid& a, const Grid& b);

/// Sub-grid copy starting at `origin` with extents `extent` (same rank).
Grid crop(const Grid& grid, const Coord& origin, const Shape& extent);

}  // namespace topowarp
