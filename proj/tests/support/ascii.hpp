#pragma once

#include <string>
#include <vector>

#include "topowarp/grid.hpp"

namespace testing_util {

/// 2D grid from rows of '#' (FG) and '.' (BG).
inline topowarp::Grid from_rows(const std::vector<std::string>& rows,
                                topowarp::Connectivity fg = topowarp::Connectivity::N4) {
  const topowarp::Shape shape(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  std::vector<std::uint8_t> cells;
  for (const auto& r : rows)
    for (char c : r) cells.push_back(c == '#' ? 1 : 0);
  return topowarp::Grid(shape, std::move(cells), topowarp::Adjacency::with_fg(fg, 2));
}

}  // namespace testing_util
