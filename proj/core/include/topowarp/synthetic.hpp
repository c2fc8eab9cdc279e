#pragma once

#include <cstdint>

#include "topowarp/grid.hpp"
#include "topowarp/rng.hpp"

namespace topowarp::synthetic {

/// Independent Bernoulli(density) cells.
Grid random_grid(const Shape& shape, double density, SplitMix64& rng);

/// Sets every cell within Euclidean `radius` of `center` (z radius scaled
/// by `z_scale` for thin volumes).
void stamp_ball(Grid& grid, double z, double y, double x, double radius, double z_scale = 1.0);

/// Thick straight segment from a to b.
void draw_segment(Grid& grid, const double a[3], const double b[3], double radius,
                  double z_scale = 1.0);

struct MaskPair {
  Grid gt;
  Grid pred;
};

/// Blobs and curves in `shape` plus a jittered copy: shifted/resized
/// primitives, an occasional dropped or extra primitive, and cut curves.
/// The two masks usually differ in topology as well as geometry.
MaskPair blob_curve_pair(const Shape& shape, std::uint64_t seed);

/// Road-network-like 2D pair of extent size x size. The ground truth is a
/// set of thick polylines crossing the image. The prediction redraws them
/// with different widths and offsets, breaks some roads, and adds
/// false-positive blobs (attached and isolated) and spurs.
MaskPair road_pair(int size, std::uint64_t seed);

}  // namespace topowarp::synthetic
