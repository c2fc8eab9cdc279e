#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topowarp {

/// Raised for malformed inputs: shape mismatches, illegal adjacency pairs,
/// out-of-range coordinates or values.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Connectivity : std::uint8_t { N4, N8, N6, N26 };

const char* to_string(Connectivity c);

/// A complementary FG/BG neighbor pair: (4,8) or (8,4) in 2D, (6,26) or
/// (26,6) in 3D. Only the FG side is stored; the BG side is implied.
class Adjacency {
 public:
  /// FG=4/BG=8 in 2D, FG=6/BG=26 in 3D.
  static Adjacency default_for(int rank);
  /// Throws ValidationError if `fg` does not belong to `rank`.
  static Adjacency with_fg(Connectivity fg, int rank);

  Connectivity fg() const { return fg_; }
  Connectivity bg() const;
  int rank() const { return (fg_ == Connectivity::N4 || fg_ == Connectivity::N8) ? 2 : 3; }
  /// True when the FG side uses the face-sharing (4 or 6) neighborhood.
  bool fg_is_face() const { return fg_ == Connectivity::N4 || fg_ == Connectivity::N6; }

  friend bool operator==(const Adjacency&, const Adjacency&) = default;

 private:
  explicit Adjacency(Connectivity fg) : fg_(fg) {}
  Connectivity fg_;
};

/// Lattice point. 2D cells use z = 0.
struct Coord {
  int z = 0;
  int y = 0;
  int x = 0;

  constexpr Coord() = default;
  constexpr Coord(int y_, int x_) : z(0), y(y_), x(x_) {}
  constexpr Coord(int z_, int y_, int x_) : z(z_), y(y_), x(x_) {}

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
};

/// Lattice extents in C order: (H, W) for 2D, (D, H, W) for 3D.
class Shape {
 public:
  Shape() = default;
  Shape(int height, int width);
  Shape(int depth, int height, int width);
  /// Builds from a list of 2 or 3 extents in C order.
  static Shape from_extents(std::span<const std::int64_t> extents);

  int rank() const { return rank_; }
  int depth() const { return depth_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const {
    return static_cast<std::size_t>(depth_) * static_cast<std::size_t>(height_) *
           static_cast<std::size_t>(width_);
  }
  /// Extents in C order, `rank()` entries.
  std::vector<std::int64_t> extents() const;
  std::string to_string() const;

  bool contains(const Coord& c) const {
    return c.z >= 0 && c.z < depth_ && c.y >= 0 && c.y < height_ && c.x >= 0 && c.x < width_;
  }
  std::size_t index(const Coord& c) const {
    return (static_cast<std::size_t>(c.z) * height_ + c.y) * width_ + c.x;
  }
  Coord coord(std::size_t i) const {
    const auto x = static_cast<int>(i % width_);
    i /= width_;
    const auto y = static_cast<int>(i % height_);
    return {static_cast<int>(i / height_), y, x};
  }

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  int rank_ = 2;
  int depth_ = 1;
  int height_ = 0;
  int width_ = 0;
};

enum class Label : std::uint8_t { Background = 0, Foreground = 1 };

/// Dense binary mask. Cells outside the lattice read as background.
class Grid {
 public:
  Grid() = default;
  /// All-background grid.
  explicit Grid(Shape shape);
  Grid(Shape shape, Adjacency adjacency);
  /// `cells` must hold exactly shape.size() values, each 0 or 1.
  Grid(Shape shape, std::vector<std::uint8_t> cells);
  Grid(Shape shape, std::vector<std::uint8_t> cells, Adjacency adjacency);

  /// Nonzero bytes become FG; no 0/1 check.
  static Grid from_nonzero(Shape shape, std::span<const std::uint8_t> bytes);

  const Shape& shape() const { return shape_; }
  int rank() const { return shape_.rank(); }
  std::size_t size() const { return cells_.size(); }
  const Adjacency& adjacency() const { return adjacency_; }
  Grid with_adjacency(Adjacency adjacency) const;

  /// Bounds-checked access; throws ValidationError outside the lattice.
  bool at(const Coord& c) const;
  /// Implicit-BG access: false outside the lattice.
  bool get(int z, int y, int x) const {
    if (z < 0 || y < 0 || x < 0 || z >= shape_.depth() || y >= shape_.height() ||
        x >= shape_.width())
      return false;
    return cells_[(static_cast<std::size_t>(z) * shape_.height() + y) * shape_.width() + x] != 0;
  }
  bool operator[](std::size_t i) const { return cells_[i] != 0; }

  void set(const Coord& c, bool value);
  void set(std::size_t i, bool value) { cells_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { cells_[i] ^= 1; }

  std::span<const std::uint8_t> cells() const { return cells_; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.shape_ == b.shape_ && a.adjacency_ == b.adjacency_ && a.cells_ == b.cells_;
  }

 private:
  Shape shape_;
  Adjacency adjacency_ = Adjacency::default_for(2);
  std::vector<std::uint8_t> cells_;
};

/// Throws ValidationError with `what` when shapes differ.
void require_same_shape(const Shape& a, const Shape& b, const char* what);

}  // namespace topowarp
