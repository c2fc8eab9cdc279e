#include "topowarp/distance.hpp"

#include <algorithm>
#include <array>

#include "neighbors.hpp"

namespace topowarp {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::CityBlock: return "cityblock";
    case Metric::Chessboard: return "chessboard";
    case Metric::EuclideanSquared: return "euclidean";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "cityblock") return Metric::CityBlock;
  if (name == "chessboard") return Metric::Chessboard;
  if (name == "euclidean") return Metric::EuclideanSquared;
  return std::nullopt;
}

namespace {

// Large enough to read as infinite after narrowing, small enough that kInf + 1 cannot overflow.
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Grid embedded in a one-cell BG frame (no frame along z for 2D grids).
struct Padded {
  int depth, height, width;
  int zpad;
  std::vector<std::int64_t> dist;

  explicit Padded(const Shape& s)
      : depth(s.rank() == 3 ? s.depth() + 2 : 1),
        height(s.height() + 2),
        width(s.width() + 2),
        zpad(s.rank() == 3 ? 1 : 0),
        dist(static_cast<std::size_t>(depth) * height * width) {}

  std::size_t index(int z, int y, int x) const {
    return (static_cast<std::size_t>(z) * height + y) * width + x;
  }
};

// Seeds get 0, everything else kInf. The frame is a seed iff seeds are BG.
Padded seed(const Grid& grid, bool seeds_are_fg) {
  Padded p(grid.shape());
  std::fill(p.dist.begin(), p.dist.end(), seeds_are_fg ? kInf : 0);
  const Shape& s = grid.shape();
  const auto cells = grid.cells();
  const std::uint8_t want = seeds_are_fg ? 1 : 0;
  std::size_t i = 0;
  for (int z = 0; z < s.depth(); ++z)
    for (int y = 0; y < s.height(); ++y) {
      std::int64_t* row = &p.dist[p.index(z + p.zpad, y + 1, 1)];
      for (int x = 0; x < s.width(); ++x, ++i) row[x] = cells[i] == want ? 0 : kInf;
    }
  return p;
}

// Two raster scans with unit-cost moves. Exact for L1 (face moves) and
// L-infinity (full moves): any shortest path can be reordered so that all
// raster-forward moves precede all raster-backward ones.
// Offsets into other rows are applied first (no dependency along the row),
// then a running scan along the row carries the +-1 neighbour in a register.
template <std::size_t N>
void relax_rows(Padded& p, const std::array<std::ptrdiff_t, 13>& offs, bool forward) {
  std::array<std::ptrdiff_t, N> d{};
  std::copy_n(offs.begin(), N, d.begin());
  const int w = p.width;
  const int z0 = p.zpad;
  const int z1 = p.depth - p.zpad;
  std::int64_t* dist = p.dist.data();
  const auto row_pass = [&](int z, int y) {
    std::int64_t* row = dist + p.index(z, y, 0);
    for (std::size_t k = 0; k < N; ++k) {
      const std::int64_t* other = row + d[k];
      for (int x = 1; x < w - 1; ++x) row[x] = std::min(row[x], other[x] + 1);
    }
    if (forward) {
      std::int64_t run = row[0];
      for (int x = 1; x < w - 1; ++x) run = row[x] = std::min(row[x], run + 1);
    } else {
      std::int64_t run = row[w - 1];
      for (int x = w - 2; x >= 1; --x) run = row[x] = std::min(row[x], run + 1);
    }
  };
  if (forward) {
    for (int z = z0; z < z1; ++z)
      for (int y = 1; y < p.height - 1; ++y) row_pass(z, y);
  } else {
    for (int z = z1 - 1; z >= z0; --z)
      for (int y = p.height - 2; y >= 1; --y) row_pass(z, y);
  }
}

void relax_all(Padded& p, const std::array<std::ptrdiff_t, 13>& offs, std::size_t n, bool forward) {
  switch (n) {
    case 1: return relax_rows<1>(p, offs, forward);
    case 2: return relax_rows<2>(p, offs, forward);
    case 3: return relax_rows<3>(p, offs, forward);
    default: return relax_rows<12>(p, offs, forward);
  }
}

void chamfer(Padded& p, Connectivity moves) {
  std::array<std::ptrdiff_t, 13> fwd{};
  std::array<std::ptrdiff_t, 13> bwd{};
  std::size_t nf = 0;
  std::size_t nb = 0;
  for (const auto& o : detail::offsets(moves)) {
    const std::ptrdiff_t d = (static_cast<std::ptrdiff_t>(o.dz) * p.height + o.dy) * p.width + o.dx;
    if (d == -1 || d == 1) continue;  // handled by the running scan
    if (d < 0)
      fwd[nf++] = d;
    else
      bwd[nb++] = d;
  }
  relax_all(p, fwd, nf, true);
  relax_all(p, bwd, nb, false);
}

// Exact 1D squared-distance lower envelope over a strided line (Meijster's
// integer separator form). Entries equal to kInf are not parabola sites.
void envelope_1d(std::int64_t* line, std::ptrdiff_t stride, int n, std::vector<std::int64_t>& g,
                 std::vector<int>& site, std::vector<int>& start) {
  g.resize(n);
  site.resize(n);
  start.resize(n);
  for (int i = 0; i < n; ++i) g[i] = line[i * stride];
  const auto f = [&](std::int64_t x, int i) { return (x - i) * (x - i) + g[i]; };
  const auto sep = [&](std::int64_t i, std::int64_t u) {
    return (u * u - i * i + g[u] - g[i]) / (2 * (u - i));
  };
  int q = -1;
  for (int u = 0; u < n; ++u) {
    if (g[u] == kInf) continue;
    while (q >= 0 && f(start[q], site[q]) > f(start[q], u)) --q;
    if (q < 0) {
      q = 0;
      site[0] = u;
      start[0] = 0;
    } else {
      const std::int64_t w = 1 + sep(site[q], u);
      if (w < n) {
        ++q;
        site[q] = u;
        start[q] = static_cast<int>(w);
      }
    }
  }
  if (q < 0) return;  // no sites: line stays infinite
  for (int u = n - 1; u >= 0; --u) {
    line[u * stride] = f(u, site[q]);
    if (u == start[q]) --q;
  }
}

void euclidean(Padded& p) {
  std::vector<std::int64_t> g;
  std::vector<int> site;
  std::vector<int> start;
  for (int z = 0; z < p.depth; ++z)
    for (int y = 0; y < p.height; ++y)
      envelope_1d(&p.dist[p.index(z, y, 0)], 1, p.width, g, site, start);
  for (int z = 0; z < p.depth; ++z)
    for (int x = 0; x < p.width; ++x)
      envelope_1d(&p.dist[p.index(z, 0, x)], p.width, p.height, g, site, start);
  if (p.depth > 1)
    for (int y = 0; y < p.height; ++y)
      for (int x = 0; x < p.width; ++x)
        envelope_1d(&p.dist[p.index(0, y, x)], static_cast<std::ptrdiff_t>(p.height) * p.width,
                    p.depth, g, site, start);
}

Padded one_sided(const Grid& grid, Metric metric, bool seeds_are_fg) {
  Padded p = seed(grid, seeds_are_fg);
  const bool volumetric = grid.rank() == 3;
  switch (metric) {
    case Metric::CityBlock:
      chamfer(p, volumetric ? Connectivity::N6 : Connectivity::N4);
      break;
    case Metric::Chessboard:
      chamfer(p, volumetric ? Connectivity::N26 : Connectivity::N8);
      break;
    case Metric::EuclideanSquared:
      euclidean(p);
      break;
  }
  return p;
}

std::int32_t narrow(std::int64_t v) {
  return v >= DistanceField::kInfinite ? DistanceField::kInfinite : static_cast<std::int32_t>(v);
}

}  // namespace

DistanceField distance_transform(const Grid& grid, Metric metric) {
  DistanceField out;
  out.shape = grid.shape();
  out.metric = metric;
  out.values.assign(grid.size(), 0);
  out.foreground_empty = grid.empty();

  const Padded to_bg = one_sided(grid, metric, false);
  const Padded to_fg = out.foreground_empty ? Padded(grid.shape()) : one_sided(grid, metric, true);
  const Shape& s = grid.shape();
  const auto cells = grid.cells();
  std::size_t i = 0;
  for (int z = 0; z < s.depth(); ++z)
    for (int y = 0; y < s.height(); ++y) {
      const auto j = to_bg.index(z + to_bg.zpad, y + 1, 1);
      const std::int64_t* bg = &to_bg.dist[j];
      const std::int64_t* fg = &to_fg.dist[j];
      for (int x = 0; x < s.width(); ++x, ++i) {
        if (cells[i])
          out.values[i] = narrow(bg[x]);
        else
          out.values[i] = out.foreground_empty ? DistanceField::kInfinite : narrow(fg[x]);
      }
    }
  return out;
}

}  // namespace topowarp
