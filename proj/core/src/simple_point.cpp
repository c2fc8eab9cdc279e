#include "topowarp/simple_point.hpp"

#include <array>
#include <bit>

#include "neighbors.hpp"
#include "topowarp/topology.hpp"

namespace topowarp {
namespace {

// Neighbor bitmasks between ring positions, per connectivity.
template <std::size_t N>
struct RingGraph {
  std::array<std::uint32_t, N> face{};  // 4/6-adjacent ring positions
  std::array<std::uint32_t, N> full{};  // 8/26-adjacent ring positions
  std::uint32_t touching_center = 0;    // positions face-adjacent to the center
  std::uint32_t geodesic = 0;           // positions usable by the face side
};

template <std::size_t N>
RingGraph<N> build_ring_graph(const std::array<detail::Offset, N>& ring) {
  RingGraph<N> g;
  for (std::size_t i = 0; i < N; ++i) {
    const auto& a = ring[i];
    const int norm = std::abs(a.dz) + std::abs(a.dy) + std::abs(a.dx);
    if (norm == 1) g.touching_center |= 1u << i;
    if (norm <= 2) g.geodesic |= 1u << i;
    for (std::size_t j = 0; j < N; ++j) {
      if (detail::adjacent(a, ring[j], Connectivity::N6)) g.face[i] |= 1u << j;
      if (detail::adjacent(a, ring[j], Connectivity::N26)) g.full[i] |= 1u << j;
    }
  }
  return g;
}

const RingGraph<8>& graph_2d() {
  static const RingGraph<8> g = build_ring_graph(detail::kN8);
  return g;
}

const RingGraph<26>& graph_3d() {
  static const RingGraph<26> g = build_ring_graph(detail::kN26);
  return g;
}

// Number of components of `members` (under `links`) that intersect `anchor`.
template <std::size_t N>
int anchored_components(std::uint32_t members, const std::array<std::uint32_t, N>& links,
                        std::uint32_t anchor) {
  int count = 0;
  std::uint32_t todo = members;
  while (todo) {
    std::uint32_t comp = todo & (~todo + 1);
    std::uint32_t frontier = comp;
    while (frontier) {
      const int i = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const std::uint32_t grow = links[i] & members & ~comp;
      comp |= grow;
      frontier |= grow;
    }
    todo &= ~comp;
    if (comp & anchor) ++count;
  }
  return count;
}

template <std::size_t N>
bool ring_test(std::uint32_t ring, const RingGraph<N>& g, bool fg_face) {
  constexpr std::uint32_t all = N == 32 ? ~0u : (1u << N) - 1;
  const std::uint32_t fg = ring & all;
  const std::uint32_t bg = ~ring & all;
  // The face-connected side only sees the geodesic neighborhood and must
  // touch the center through a face; the full side sees the whole ring.
  const auto face_side = [&](std::uint32_t set) {
    return anchored_components(set & g.geodesic, g.face, g.touching_center);
  };
  const auto full_side = [&](std::uint32_t set) { return anchored_components(set, g.full, all); };
  if (fg_face) return face_side(fg) == 1 && full_side(bg) == 1;
  return full_side(fg) == 1 && face_side(bg) == 1;
}

struct Table2D {
  std::array<bool, 256> fg4{};
  std::array<bool, 256> fg8{};
};

const Table2D& table_2d() {
  static const Table2D t = [] {
    Table2D out;
    for (std::uint32_t r = 0; r < 256; ++r) {
      out.fg4[r] = ring_test(r, graph_2d(), true);
      out.fg8[r] = ring_test(r, graph_2d(), false);
    }
    return out;
  }();
  return t;
}

void require_patch(const NeighborhoodPatch& patch, const Adjacency& adjacency, int rank,
                   const char* what) {
  if (patch.rank != rank || adjacency.rank() != rank)
    throw ValidationError(std::string(what) + ": expected a rank-" + std::to_string(rank) +
                          " patch and adjacency");
}

}  // namespace

NeighborhoodPatch extract_patch(const Grid& grid, const Coord& c) {
  if (!grid.shape().contains(c)) throw ValidationError("extract_patch: coordinate out of bounds");
  NeighborhoodPatch p;
  p.rank = grid.rank();
  p.center = grid.get(c.z, c.y, c.x);
  if (p.rank == 2) {
    p.ring = detail::ring_bits_2d(grid, c.y, c.x);
  } else {
    int k = 0;
    for (const auto& o : detail::kN26) {
      if (grid.get(c.z + o.dz, c.y + o.dy, c.x + o.dx)) p.ring |= 1u << k;
      ++k;
    }
  }
  return p;
}

bool simple_ring_test(const NeighborhoodPatch& patch, Adjacency adjacency) {
  if (patch.rank != adjacency.rank())
    throw ValidationError("simple_ring_test: patch and adjacency rank differ");
  if (patch.rank == 2) return ring_test(patch.ring, graph_2d(), adjacency.fg_is_face());
  return ring_test(patch.ring, graph_3d(), adjacency.fg_is_face());
}

bool detail::simple_2d_lookup(std::uint8_t ring, bool fg_face) {
  const auto& t = table_2d();
  return fg_face ? t.fg4[ring] : t.fg8[ring];
}

bool is_simple_2d(const NeighborhoodPatch& patch, Adjacency adjacency) {
  require_patch(patch, adjacency, 2, "is_simple_2d");
  return detail::simple_2d_lookup(static_cast<std::uint8_t>(patch.ring), adjacency.fg_is_face());
}

bool is_simple_3d(const NeighborhoodPatch& patch, Adjacency adjacency) {
  require_patch(patch, adjacency, 3, "is_simple_3d");
  return ring_test(patch.ring, graph_3d(), adjacency.fg_is_face());
}

bool is_simple_at(const Grid& grid, const Coord& c) {
  const auto patch = extract_patch(grid, c);
  return grid.rank() == 2 ? is_simple_2d(patch, grid.adjacency())
                          : is_simple_3d(patch, grid.adjacency());
}

bool oracle_is_simple(const Grid& grid, const Coord& c) {
  if (!grid.shape().contains(c)) throw ValidationError("oracle_is_simple: coordinate out of bounds");
  Grid flipped = grid;
  flipped.flip(grid.shape().index(c));
  return betti(grid) == betti(flipped);
}

}  // namespace topowarp
