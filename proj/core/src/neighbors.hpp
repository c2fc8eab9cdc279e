#pragma once

#include <array>
#include <cstdlib>
#include <span>

#include "topowarp/grid.hpp"

namespace topowarp::detail {

struct Offset {
  int dz, dy, dx;
};

constexpr std::array<Offset, 4> kN4{{{0, -1, 0}, {0, 0, -1}, {0, 0, 1}, {0, 1, 0}}};
constexpr std::array<Offset, 8> kN8{{{0, -1, -1}, {0, -1, 0}, {0, -1, 1}, {0, 0, -1},
                                     {0, 0, 1}, {0, 1, -1}, {0, 1, 0}, {0, 1, 1}}};
constexpr std::array<Offset, 6> kN6{
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};

constexpr std::array<Offset, 26> make_n26() {
  std::array<Offset, 26> out{};
  int k = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dz || dy || dx) out[k++] = {dz, dy, dx};
  return out;
}
constexpr std::array<Offset, 26> kN26 = make_n26();

inline std::span<const Offset> offsets(Connectivity c) {
  switch (c) {
    case Connectivity::N4: return kN4;
    case Connectivity::N8: return kN8;
    case Connectivity::N6: return kN6;
    case Connectivity::N26: return kN26;
  }
  return kN4;
}

/// Whether two ring offsets (relative to a common center) are neighbors under `c`.
constexpr bool adjacent(const Offset& a, const Offset& b, Connectivity c) {
  const int dz = a.dz > b.dz ? a.dz - b.dz : b.dz - a.dz;
  const int dy = a.dy > b.dy ? a.dy - b.dy : b.dy - a.dy;
  const int dx = a.dx > b.dx ? a.dx - b.dx : b.dx - a.dx;
  if (dz + dy + dx == 0) return false;
  if (c == Connectivity::N4 || c == Connectivity::N6) return dz + dy + dx == 1;
  return dz <= 1 && dy <= 1 && dx <= 1;
}

inline void require_rank(const Grid& grid, Connectivity c, const char* what) {
  const bool planar = c == Connectivity::N4 || c == Connectivity::N8;
  if ((grid.rank() == 2) != planar)
    throw ValidationError(std::string(what) + ": " + to_string(c) +
                          "-adjacency is not legal for rank " + std::to_string(grid.rank()));
}

}  // namespace topowarp::detail
