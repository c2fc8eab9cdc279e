#include "topowarp/loss.hpp"

#include <algorithm>
#include <cmath>

namespace topowarp {

LikelihoodMap::LikelihoodMap(Shape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size())
    throw ValidationError("likelihood: expected " + std::to_string(shape_.size()) +
                          " values, got " + std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw ValidationError("likelihood: value at flat index " + std::to_string(i) +
                            " is outside [0, 1]");
  }
}

LikelihoodMap LikelihoodMap::from_span(Shape shape, std::span<const float> values) {
  return LikelihoodMap(shape, std::vector<double>(values.begin(), values.end()));
}

const char* to_string(PixelLoss p) {
  switch (p) {
    case PixelLoss::CrossEntropy: return "ce";
    case PixelLoss::MeanSquaredError: return "mse";
    case PixelLoss::SoftDice: return "dice";
  }
  return "?";
}

std::optional<PixelLoss> parse_pixel_loss(std::string_view name) {
  if (name == "ce") return PixelLoss::CrossEntropy;
  if (name == "mse") return PixelLoss::MeanSquaredError;
  if (name == "dice") return PixelLoss::SoftDice;
  return std::nullopt;
}

const char* to_string(Reduction r) { return r == Reduction::Mean ? "mean" : "sum"; }

void LossConfig::validate() const {
  if (!(lambda_warp >= 0.0) || !std::isfinite(lambda_warp))
    throw ValidationError("loss: lambda_warp must be a finite value >= 0");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("loss: epsilon must lie in (0, 0.5)");
  if (!(dice_smooth > 0.0) || !std::isfinite(dice_smooth))
    throw ValidationError("loss: dice_smooth must be > 0");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Grid binarize(const LikelihoodMap& f) { return binarize(f, Adjacency::default_for(f.shape().rank())); }

Grid binarize(const LikelihoodMap& f, Adjacency adjacency) {
  std::vector<std::uint8_t> cells(f.size());
  const auto v = f.values();
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = v[i] > 0.5 ? 1 : 0;
  return Grid(f.shape(), std::move(cells), adjacency);
}

namespace {

// Dice loss over the cells listed in `cells`; gradient written into `grad`.
double dice_over(const LikelihoodMap& f, const Grid& g, std::span<const std::size_t> cells,
                 double smooth, std::vector<double>& grad) {
  std::vector<double> fg(cells.size());
  std::vector<double> fs(cells.size());
  std::vector<double> gs(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double fv = f[cells[k]];
    const double gv = g[cells[k]] ? 1.0 : 0.0;
    fg[k] = fv * gv;
    fs[k] = fv;
    gs[k] = gv;
  }
  const double numer = 2.0 * pairwise_sum(fg) + smooth;
  const double denom = pairwise_sum(fs) + pairwise_sum(gs) + smooth;
  for (std::size_t k = 0; k < cells.size(); ++k)
    grad[cells[k]] = -(2.0 * gs[k] * denom - numer) / (denom * denom);
  return 1.0 - numer / denom;
}

}  // namespace

LossTerm soft_dice_loss(const LikelihoodMap& f, const Grid& g, double smooth) {
  require_same_shape(f.shape(), g.shape(), "soft_dice_loss");
  if (!(smooth > 0.0)) throw ValidationError("soft_dice_loss: smooth must be > 0");
  std::vector<std::size_t> all(f.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  LossTerm out;
  out.gradient.assign(f.size(), 0.0);
  out.value = dice_over(f, g, all, smooth, out.gradient);
  return out;
}

LossTerm warping_loss(const LikelihoodMap& f, const Grid& g, const Grid& critical,
                      const LossConfig& config) {
  config.validate();
  require_same_shape(f.shape(), g.shape(), "warping_loss");
  require_same_shape(f.shape(), critical.shape(), "warping_loss");

  LossTerm out;
  out.gradient.assign(f.size(), 0.0);
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < critical.size(); ++i)
    if (critical[i]) cells.push_back(i);
  if (cells.empty()) return out;

  if (config.pixel_loss == PixelLoss::SoftDice) {
    out.value = dice_over(f, g, cells, config.dice_smooth, out.gradient);
    return out;
  }

  const double eps = config.epsilon;
  std::vector<double> per_cell(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::size_t i = cells[k];
    const double fv = f[i];
    const bool fg = g[i];
    if (config.pixel_loss == PixelLoss::CrossEntropy) {
      const double fc = std::clamp(fv, eps, 1.0 - eps);
      per_cell[k] = fg ? -std::log(fc) : -std::log(1.0 - fc);
      const bool clamped = fv < eps || fv > 1.0 - eps;
      out.gradient[i] = clamped ? 0.0 : (fg ? -1.0 / fc : 1.0 / (1.0 - fc));
    } else {
      const double diff = fv - (fg ? 1.0 : 0.0);
      per_cell[k] = diff * diff;
      out.gradient[i] = 2.0 * diff;
    }
  }
  out.value = pairwise_sum(per_cell);
  if (config.reduction == Reduction::Mean) {
    const double n = static_cast<double>(cells.size());
    out.value /= n;
    for (auto i : cells) out.gradient[i] /= n;
  }
  return out;
}

LossTerm warping_loss(const LikelihoodMap& f, const Grid& g, const CriticalMask& critical,
                      const LossConfig& config) {
  return warping_loss(f, g, critical.mask, config);
}

LossReport total_loss(const LikelihoodMap& f, const Grid& g, const LossConfig& config,
                      const WarpConfig& warp_config) {
  config.validate();
  require_same_shape(f.shape(), g.shape(), "total_loss");
  const Grid pred = binarize(f, g.adjacency());
  const CriticalMask critical = critical_mask(pred, g, warp_config);

  const LossTerm dice = soft_dice_loss(f, g, config.dice_smooth);
  const LossTerm warp_term = warping_loss(f, g, critical.mask, config);

  LossReport r;
  r.l_dice = dice.value;
  r.l_warp = warp_term.value;
  r.l_total = r.l_dice + config.lambda_warp * r.l_warp;
  r.critical_count = critical.mask.count();
  r.gradient.resize(f.size());
  for (std::size_t i = 0; i < r.gradient.size(); ++i)
    r.gradient[i] = dice.gradient[i] + config.lambda_warp * warp_term.gradient[i];
  return r;
}

}  // namespace topowarp
