#include "topowarp/grid.hpp"

#include <algorithm>
#include <string>

namespace topowarp {

const char* to_string(Connectivity c) {
  switch (c) {
    case Connectivity::N4: return "4";
    case Connectivity::N8: return "8";
    case Connectivity::N6: return "6";
    case Connectivity::N26: return "26";
  }
  return "?";
}

Adjacency Adjacency::default_for(int rank) {
  if (rank == 2) return Adjacency(Connectivity::N4);
  if (rank == 3) return Adjacency(Connectivity::N6);
  throw ValidationError("adjacency: rank must be 2 or 3, got " + std::to_string(rank));
}

Adjacency Adjacency::with_fg(Connectivity fg, int rank) {
  const bool planar = fg == Connectivity::N4 || fg == Connectivity::N8;
  if ((rank == 2 && !planar) || (rank == 3 && planar) || (rank != 2 && rank != 3))
    throw ValidationError(std::string("adjacency: FG ") + to_string(fg) +
                          "-adjacency is not legal for rank " + std::to_string(rank));
  return Adjacency(fg);
}

Connectivity Adjacency::bg() const {
  switch (fg_) {
    case Connectivity::N4: return Connectivity::N8;
    case Connectivity::N8: return Connectivity::N4;
    case Connectivity::N6: return Connectivity::N26;
    case Connectivity::N26: return Connectivity::N6;
  }
  return Connectivity::N8;
}

Shape::Shape(int height, int width) : rank_(2), depth_(1), height_(height), width_(width) {
  if (height <= 0 || width <= 0)
    throw ValidationError("shape: extents must be positive, got " + to_string());
}

Shape::Shape(int depth, int height, int width)
    : rank_(3), depth_(depth), height_(height), width_(width) {
  if (depth <= 0 || height <= 0 || width <= 0)
    throw ValidationError("shape: extents must be positive, got " + to_string());
}

Shape Shape::from_extents(std::span<const std::int64_t> extents) {
  constexpr std::int64_t kMax = 1 << 20;
  for (auto e : extents)
    if (e <= 0 || e > kMax) throw ValidationError("shape: extent out of range");
  if (extents.size() == 2)
    return Shape(static_cast<int>(extents[0]), static_cast<int>(extents[1]));
  if (extents.size() == 3)
    return Shape(static_cast<int>(extents[0]), static_cast<int>(extents[1]),
                 static_cast<int>(extents[2]));
  throw ValidationError("shape: rank must be 2 or 3, got " + std::to_string(extents.size()));
}

std::vector<std::int64_t> Shape::extents() const {
  if (rank_ == 2) return {height_, width_};
  return {depth_, height_, width_};
}

std::string Shape::to_string() const {
  std::string s = rank_ == 3 ? std::to_string(depth_) + "x" : std::string();
  return s + std::to_string(height_) + "x" + std::to_string(width_);
}

Grid::Grid(Shape shape) : Grid(shape, Adjacency::default_for(shape.rank())) {}

Grid::Grid(Shape shape, Adjacency adjacency)
    : shape_(shape), adjacency_(adjacency), cells_(shape.size(), 0) {
  if (adjacency.rank() != shape.rank())
    throw ValidationError("grid: adjacency does not match grid rank");
}

Grid::Grid(Shape shape, std::vector<std::uint8_t> cells)
    : Grid(shape, std::move(cells), Adjacency::default_for(shape.rank())) {}

Grid::Grid(Shape shape, std::vector<std::uint8_t> cells, Adjacency adjacency)
    : shape_(shape), adjacency_(adjacency), cells_(std::move(cells)) {
  if (adjacency.rank() != shape.rank())
    throw ValidationError("grid: adjacency does not match grid rank");
  if (cells_.size() != shape.size())
    throw ValidationError("grid: expected " + std::to_string(shape.size()) + " cells, got " +
                          std::to_string(cells_.size()));
  if (std::any_of(cells_.begin(), cells_.end(), [](std::uint8_t v) { return v > 1; }))
    throw ValidationError("grid: cell values must be 0 or 1");
}

Grid Grid::from_nonzero(Shape shape, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != shape.size())
    throw ValidationError("grid: expected " + std::to_string(shape.size()) + " cells, got " +
                          std::to_string(bytes.size()));
  std::vector<std::uint8_t> cells(bytes.size());
  std::transform(bytes.begin(), bytes.end(), cells.begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v != 0; });
  return Grid(shape, std::move(cells));
}

Grid Grid::with_adjacency(Adjacency adjacency) const {
  Grid out = *this;
  if (adjacency.rank() != shape_.rank())
    throw ValidationError("grid: adjacency does not match grid rank");
  out.adjacency_ = adjacency;
  return out;
}

bool Grid::at(const Coord& c) const {
  if (!shape_.contains(c)) throw ValidationError("grid: coordinate out of bounds");
  return cells_[shape_.index(c)] != 0;
}

void Grid::set(const Coord& c, bool value) {
  if (!shape_.contains(c)) throw ValidationError("grid: coordinate out of bounds");
  cells_[shape_.index(c)] = value ? 1 : 0;
}

std::size_t Grid::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b))
    throw ValidationError(std::string(what) + ": shape mismatch " + a.to_string() + " vs " +
                          b.to_string());
}

}  // namespace topowarp
