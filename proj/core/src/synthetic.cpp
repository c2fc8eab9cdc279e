#include "topowarp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace topowarp::synthetic {
namespace {

double uniform(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.unit(); }
bool chance(SplitMix64& rng, double p) { return rng.unit() < p; }

struct Primitive {
  bool segment = false;
  double a[3] = {0, 0, 0};
  double b[3] = {0, 0, 0};
  double radius = 1.0;
};

void draw(Grid& g, const Primitive& p, double z_scale) {
  if (p.segment)
    draw_segment(g, p.a, p.b, p.radius, z_scale);
  else
    stamp_ball(g, p.a[0], p.a[1], p.a[2], p.radius, z_scale);
}

void random_point(const Shape& s, SplitMix64& rng, double out[3]) {
  out[0] = s.rank() == 3 ? uniform(rng, 0, s.depth() - 1) : 0.0;
  out[1] = uniform(rng, 0, s.height() - 1);
  out[2] = uniform(rng, 0, s.width() - 1);
}

void jitter(const Shape& s, SplitMix64& rng, double p[3], double amount) {
  if (s.rank() == 3) p[0] = std::clamp(p[0] + uniform(rng, -amount / 2, amount / 2), 0.0, s.depth() - 1.0);
  p[1] += uniform(rng, -amount, amount);
  p[2] += uniform(rng, -amount, amount);
}

void point_on_edge(int size, int edge, SplitMix64& rng, double out[3]) {
  const double t = uniform(rng, 0.1 * size, 0.9 * size);
  out[0] = 0.0;
  switch (edge) {
    case 0: out[1] = 0; out[2] = t; break;
    case 1: out[1] = size - 1; out[2] = t; break;
    case 2: out[1] = t; out[2] = 0; break;
    default: out[1] = t; out[2] = size - 1; break;
  }
}

}  // namespace

Grid random_grid(const Shape& shape, double density, SplitMix64& rng) {
  std::vector<std::uint8_t> cells(shape.size());
  for (auto& c : cells) c = rng.unit() < density ? 1 : 0;
  return Grid(shape, std::move(cells));
}

void stamp_ball(Grid& grid, double z, double y, double x, double radius, double z_scale) {
  const Shape& s = grid.shape();
  const double rz = grid.rank() == 3 ? radius * z_scale : 0.0;
  const int z0 = std::max(0, static_cast<int>(std::floor(z - rz)));
  const int z1 = std::min(s.depth() - 1, static_cast<int>(std::ceil(z + rz)));
  const int y0 = std::max(0, static_cast<int>(std::floor(y - radius)));
  const int y1 = std::min(s.height() - 1, static_cast<int>(std::ceil(y + radius)));
  const int x0 = std::max(0, static_cast<int>(std::floor(x - radius)));
  const int x1 = std::min(s.width() - 1, static_cast<int>(std::ceil(x + radius)));
  const double r2 = radius * radius;
  for (int cz = z0; cz <= z1; ++cz) {
    const double dz = grid.rank() == 3 ? (cz - z) / z_scale : 0.0;
    for (int cy = y0; cy <= y1; ++cy)
      for (int cx = x0; cx <= x1; ++cx) {
        const double dy = cy - y;
        const double dx = cx - x;
        if (dz * dz + dy * dy + dx * dx <= r2) grid.set(s.index({cz, cy, cx}), true);
      }
  }
}

void draw_segment(Grid& grid, const double a[3], const double b[3], double radius, double z_scale) {
  const double len = std::sqrt((b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]) +
                               (b[2] - a[2]) * (b[2] - a[2]));
  const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    stamp_ball(grid, a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2]),
               radius, z_scale);
  }
}

MaskPair blob_curve_pair(const Shape& shape, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double extent = std::min(shape.height(), shape.width());
  const double z_scale = shape.rank() == 3 ? 0.5 : 1.0;

  std::vector<Primitive> prims;
  const int blobs = 2 + static_cast<int>(rng.below(3));
  for (int i = 0; i < blobs; ++i) {
    Primitive p;
    random_point(shape, rng, p.a);
    p.radius = uniform(rng, extent / 16, extent / 6);
    prims.push_back(p);
  }
  const int curves = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < curves; ++i) {
    Primitive p;
    p.segment = true;
    random_point(shape, rng, p.a);
    random_point(shape, rng, p.b);
    p.radius = uniform(rng, 0.5, 1.8);
    prims.push_back(p);
  }

  MaskPair out{Grid(shape), Grid(shape)};
  for (const auto& p : prims) draw(out.gt, p, z_scale);

  for (const auto& p : prims) {
    if (chance(rng, 0.15)) continue;
    Primitive q = p;
    jitter(shape, rng, q.a, 2.0);
    jitter(shape, rng, q.b, 2.0);
    q.radius = std::max(0.6, p.radius + uniform(rng, -1.0, 1.0));
    if (q.segment && chance(rng, 0.35)) {
      const double t1 = uniform(rng, 0.2, 0.6);
      const double t2 = t1 + uniform(rng, 0.05, 0.2);
      Primitive head = q;
      Primitive tail = q;
      for (int k = 0; k < 3; ++k) {
        head.b[k] = q.a[k] + t1 * (q.b[k] - q.a[k]);
        tail.a[k] = q.a[k] + t2 * (q.b[k] - q.a[k]);
      }
      draw(out.pred, head, z_scale);
      draw(out.pred, tail, z_scale);
    } else {
      draw(out.pred, q, z_scale);
    }
  }
  if (chance(rng, 0.3)) {
    Primitive extra;
    random_point(shape, rng, extra.a);
    extra.radius = uniform(rng, 1.0, extent / 8);
    draw(out.pred, extra, z_scale);
  }
  return out;
}

MaskPair road_pair(int size, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const Shape shape(size, size);
  MaskPair out{Grid(shape), Grid(shape)};

  struct Road {
    double pts[3][3];
    double radius;
  };
  std::vector<Road> roads;
  const int count = 4 + size / 128;
  for (int i = 0; i < count; ++i) {
    Road r{};
    const int from = static_cast<int>(rng.below(4));
    const int to = (from + 1 + static_cast<int>(rng.below(3))) % 4;
    point_on_edge(size, from, rng, r.pts[0]);
    point_on_edge(size, to, rng, r.pts[2]);
    for (int k = 0; k < 3; ++k)
      r.pts[1][k] = 0.5 * (r.pts[0][k] + r.pts[2][k]) + (k ? uniform(rng, -0.15, 0.15) * size : 0.0);
    r.radius = uniform(rng, 2.5, 4.5);
    roads.push_back(r);
  }
  for (const auto& r : roads) {
    draw_segment(out.gt, r.pts[0], r.pts[1], r.radius);
    draw_segment(out.gt, r.pts[1], r.pts[2], r.radius);
  }

  for (const auto& r : roads) {
    Road p = r;
    for (auto& pt : p.pts) jitter(shape, rng, pt, 3.0);
    p.radius = std::max(1.5, r.radius + uniform(rng, -1.5, 3.0));
    for (int seg = 0; seg < 2; ++seg) {
      const double* a = p.pts[seg];
      const double* b = p.pts[seg + 1];
      if (chance(rng, 0.3)) {
        const double len = std::hypot(b[1] - a[1], b[2] - a[2]);
        const double t1 = uniform(rng, 0.2, 0.7);
        const double t2 = std::min(0.95, t1 + uniform(rng, 8.0, 24.0) / std::max(len, 1.0));
        double m1[3];
        double m2[3];
        for (int k = 0; k < 3; ++k) {
          m1[k] = a[k] + t1 * (b[k] - a[k]);
          m2[k] = a[k] + t2 * (b[k] - a[k]);
        }
        draw_segment(out.pred, a, m1, p.radius);
        draw_segment(out.pred, m2, b, p.radius);
      } else {
        draw_segment(out.pred, a, b, p.radius);
      }
    }
  }

  const int blobs = 3 + size / 64;
  for (int i = 0; i < blobs; ++i) {
    double c[3];
    if (chance(rng, 0.5)) {
      const Road& r = roads[rng.below(roads.size())];
      const double t = rng.unit();
      const int seg = chance(rng, 0.5) ? 0 : 1;
      for (int k = 0; k < 3; ++k) c[k] = r.pts[seg][k] + t * (r.pts[seg + 1][k] - r.pts[seg][k]);
      jitter(shape, rng, c, 8.0);
    } else {
      random_point(shape, rng, c);
    }
    stamp_ball(out.pred, 0, c[1], c[2], uniform(rng, 6.0, 18.0));
  }
  for (int i = 0; i < 2; ++i) {
    double a[3];
    double b[3];
    random_point(shape, rng, a);
    for (int k = 0; k < 3; ++k) b[k] = a[k];
    b[1] += uniform(rng, -40, 40);
    b[2] += uniform(rng, -40, 40);
    draw_segment(out.pred, a, b, uniform(rng, 1.5, 3.5));
  }
  return out;
}

}  // namespace topowarp::synthetic
