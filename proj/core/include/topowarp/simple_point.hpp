#pragma once

#include <cstdint>

#include "topowarp/grid.hpp"

namespace topowarp {

/// A cell's value together with its 8 (2D) or 26 (3D) neighbors.
///
/// Ring bit k holds the k-th neighbor in row-major order over the 3x3
/// (3x3x3) block with the center skipped. In 2D that is
///
///     0 1 2
///     3 . 4
///     5 6 7
///
/// and in 3D the same order with z as the slowest axis (bits 0-8 are the
/// z-1 plane, 9-16 the center plane, 17-25 the z+1 plane).
struct NeighborhoodPatch {
  int rank = 2;
  bool center = false;
  std::uint32_t ring = 0;
};

/// Reads the neighborhood of `c`; cells outside the grid read as BG.
NeighborhoodPatch extract_patch(const Grid& grid, const Coord& c);

/// Two-condition simple-point test evaluated directly on the ring: exactly
/// one FG ring component is FG-adjacent to the center, and exactly one BG
/// ring component is BG-adjacent to the center. For the face-adjacency side
/// in 3D the ring is restricted to the 18-neighborhood, because 6-paths
/// through the eight corner cells would otherwise join components that are
/// only connected around the center. Independent of `patch.center`.
bool simple_ring_test(const NeighborhoodPatch& patch, Adjacency adjacency);

/// 2D test backed by a 256-entry table built from simple_ring_test.
bool is_simple_2d(const NeighborhoodPatch& patch, Adjacency adjacency);
bool is_simple_3d(const NeighborhoodPatch& patch, Adjacency adjacency);

/// Whether flipping `c` preserves the grid's topology, decided locally.
bool is_simple_at(const Grid& grid, const Coord& c);

/// Reference test: flip `c` and compare whole-grid Betti profiles.
bool oracle_is_simple(const Grid& grid, const Coord& c);

namespace detail {

/// Table lookup for a 2D ring; `fg_face` selects the (4,8) table.
bool simple_2d_lookup(std::uint8_t ring, bool fg_face);

inline std::uint8_t ring_bits_2d(const Grid& g, int y, int x) {
  const Shape& s = g.shape();
  if (y > 0 && x > 0 && y + 1 < s.height() && x + 1 < s.width()) {
    const auto w = static_cast<std::size_t>(s.width());
    const std::uint8_t* p = g.cells().data() + static_cast<std::size_t>(y) * w + x;
    const std::uint8_t* up = p - w;
    const std::uint8_t* dn = p + w;
    return static_cast<std::uint8_t>(up[-1] | up[0] << 1 | up[1] << 2 | p[-1] << 3 |
                                     p[1] << 4 | dn[-1] << 5 | dn[0] << 6 | dn[1] << 7);
  }
  std::uint8_t bits = 0;
  int k = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (!dy && !dx) continue;
      if (g.get(0, y + dy, x + dx)) bits |= static_cast<std::uint8_t>(1u << k);
      ++k;
    }
  return bits;
}

}  // namespace detail

}  // namespace topowarp
