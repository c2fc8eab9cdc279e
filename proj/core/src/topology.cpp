#include "topowarp/topology.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "neighbors.hpp"

namespace topowarp {

ComponentLabeling connected_components(const Grid& grid, Label set, Connectivity adjacency) {
  detail::require_rank(grid, adjacency, "connected_components");
  const Shape& shape = grid.shape();
  const auto want = static_cast<std::uint8_t>(set);
  const auto cells = grid.cells();
  const auto nbrs = detail::offsets(adjacency);

  ComponentLabeling out;
  out.labels.assign(grid.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < cells.size(); ++seed) {
    if (cells[seed] != want || out.labels[seed] != 0) continue;
    const auto label = ++out.count;
    out.labels[seed] = label;
    stack.push_back(seed);
    while (!stack.empty()) {
      const Coord c = shape.coord(stack.back());
      stack.pop_back();
      for (const auto& o : nbrs) {
        const Coord n{c.z + o.dz, c.y + o.dy, c.x + o.dx};
        if (!shape.contains(n)) continue;
        const auto i = shape.index(n);
        if (cells[i] == want && out.labels[i] == 0) {
          out.labels[i] = label;
          stack.push_back(i);
        }
      }
    }
  }
  return out;
}

namespace {

// Cells are vertices; an edge/square/cube exists when every cell it spans is FG.
long euler_face_complex(const Grid& g) {
  const Shape& s = g.shape();
  const int zext = g.rank() == 3 ? 2 : 1;
  long chi = 0;
  for (int z = 0; z < s.depth(); ++z)
    for (int y = 0; y < s.height(); ++y)
      for (int x = 0; x < s.width(); ++x) {
        if (!g.get(z, y, x)) continue;
        for (int ez = 0; ez < zext; ++ez)
          for (int ey = 0; ey < 2; ++ey)
            for (int ex = 0; ex < 2; ++ex) {
              bool all = true;
              for (int a = 0; a <= ez && all; ++a)
                for (int b = 0; b <= ey && all; ++b)
                  for (int c = 0; c <= ex && all; ++c) all = g.get(z + a, y + b, x + c);
              if (all) chi += ((ez + ey + ex) % 2 == 0) ? 1 : -1;
            }
      }
  return chi;
}

// Each FG cell is a closed unit square/cube; lattice faces are counted once.
long euler_closed_complex(const Grid& g) {
  const Shape& s = g.shape();
  const bool volumetric = g.rank() == 3;
  const int zmax = volumetric ? s.depth() : 0;
  long chi = 0;
  for (int cz = 0; cz <= zmax; ++cz)
    for (int cy = 0; cy <= s.height(); ++cy)
      for (int cx = 0; cx <= s.width(); ++cx)
        for (int ez = 0; ez < (volumetric ? 2 : 1); ++ez)
          for (int ey = 0; ey < 2; ++ey)
            for (int ex = 0; ex < 2; ++ex) {
              if ((volumetric && cz + ez > s.depth()) || cy + ey > s.height() ||
                  cx + ex > s.width())
                continue;
              // Voxel candidates per axis: spanned axis -> {c}, else {c-1, c}.
              const int z0 = volumetric ? (ez ? cz : cz - 1) : 0;
              const int z1 = volumetric ? cz : 0;
              const int y0 = ey ? cy : cy - 1;
              const int x0 = ex ? cx : cx - 1;
              bool any = false;
              for (int z = z0; z <= z1 && !any; ++z)
                for (int y = y0; y <= cy && !any; ++y)
                  for (int x = x0; x <= cx && !any; ++x) any = g.get(z, y, x);
              if (any) chi += ((ez + ey + ex) % 2 == 0) ? 1 : -1;
            }
  return chi;
}

int enclosed_components(const Grid& grid, Connectivity adjacency) {
  const auto lab = connected_components(grid, Label::Background, adjacency);
  const Shape& s = grid.shape();
  std::vector<char> touches(static_cast<std::size_t>(lab.count) + 1, 0);
  for (std::size_t i = 0; i < lab.labels.size(); ++i) {
    if (lab.labels[i] == 0) continue;
    const Coord c = s.coord(i);
    const bool border = c.y == 0 || c.x == 0 || c.y == s.height() - 1 ||
                        c.x == s.width() - 1 ||
                        (grid.rank() == 3 && (c.z == 0 || c.z == s.depth() - 1));
    if (border) touches[lab.labels[i]] = 1;
  }
  return static_cast<int>(std::count(touches.begin() + 1, touches.end(), 0));
}

}  // namespace

long euler_characteristic(const Grid& grid) {
  return grid.adjacency().fg_is_face() ? euler_face_complex(grid) : euler_closed_complex(grid);
}

BettiProfile betti(const Grid& grid) {
  BettiProfile p;
  p.b0 = connected_components(grid, Label::Foreground, grid.adjacency().fg()).count;
  p.euler = euler_characteristic(grid);
  if (grid.rank() == 2) {
    p.b1 = static_cast<int>(p.b0 - p.euler);
  } else {
    p.b2 = enclosed_components(grid, grid.adjacency().bg());
    p.b1 = static_cast<int>(p.b0 + p.b2 - p.euler);
  }
  return p;
}

Grid xor_mask(const Grid& a, const Grid& b) {
  require_same_shape(a.shape(), b.shape(), "xor_mask");
  std::vector<std::uint8_t> out(a.size());
  const auto ca = a.cells();
  const auto cb = b.cells();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ca[i] ^ cb[i];
  return Grid(a.shape(), std::move(out), a.adjacency());
}

std::size_t hamming(const Grid& a, const Grid& b) {
  require_same_shape(a.shape(), b.shape(), "hamming");
  const auto ca = a.cells();
  const auto cb = b.cells();
  std::size_t n = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) n += ca[i] ^ cb[i];
  return n;
}

Grid crop(const Grid& grid, const Coord& origin, const Shape& extent) {
  if (extent.rank() != grid.rank()) throw ValidationError("crop: rank mismatch");
  const Shape& s = grid.shape();
  if (origin.z < 0 || origin.y < 0 || origin.x < 0 || origin.z + extent.depth() > s.depth() ||
      origin.y + extent.height() > s.height() || origin.x + extent.width() > s.width())
    throw ValidationError("crop: window " + extent.to_string() + " does not fit in " +
                          s.to_string());
  std::vector<std::uint8_t> out;
  out.reserve(extent.size());
  for (int z = 0; z < extent.depth(); ++z)
    for (int y = 0; y < extent.height(); ++y) {
      const auto row = grid.cells().subspan(
          s.index({origin.z + z, origin.y + y, origin.x}), static_cast<std::size_t>(extent.width()));
      out.insert(out.end(), row.begin(), row.end());
    }
  return Grid(extent, std::move(out), grid.adjacency());
}

}  // namespace topowarp
