#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "topowarp/grid.hpp"

namespace topowarp {

enum class Metric : std::uint8_t { CityBlock, Chessboard, EuclideanSquared };

const char* to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

/// Two-sided distance transform: every FG cell holds its distance to the
/// nearest BG cell (out-of-bounds cells count as BG), every BG cell its
/// distance to the nearest FG cell. EuclideanSquared stores squared
/// distances so all values stay exact integers.
struct DistanceField {
  static constexpr std::int32_t kInfinite = std::numeric_limits<std::int32_t>::max();

  Shape shape;
  Metric metric = Metric::CityBlock;
  std::vector<std::int32_t> values;
  /// Set when the grid has no FG cell; BG cells then hold kInfinite.
  bool foreground_empty = false;

  std::int32_t at(const Coord& c) const { return values[shape.index(c)]; }
};

DistanceField distance_transform(const Grid& grid, Metric metric = Metric::CityBlock);

}  // namespace topowarp
