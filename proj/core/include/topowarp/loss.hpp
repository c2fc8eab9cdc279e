#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "topowarp/grid.hpp"
#include "topowarp/warp.hpp"

namespace topowarp {

/// Per-cell probabilities in [0, 1]. NaN, infinities and out-of-range
/// values are rejected on construction.
class LikelihoodMap {
 public:
  LikelihoodMap(Shape shape, std::vector<double> values);
  static LikelihoodMap from_span(Shape shape, std::span<const float> values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Shape shape_;
  std::vector<double> values_;
};

enum class PixelLoss : std::uint8_t { CrossEntropy, MeanSquaredError, SoftDice };
enum class Reduction : std::uint8_t { Mean, Sum };

const char* to_string(PixelLoss p);
std::optional<PixelLoss> parse_pixel_loss(std::string_view name);
const char* to_string(Reduction r);

struct LossConfig {
  PixelLoss pixel_loss = PixelLoss::CrossEntropy;
  double lambda_warp = 1e-4;
  /// Log arguments are clamped to [epsilon, 1 - epsilon].
  double epsilon = 1e-7;
  double dice_smooth = 1.0;
  /// Reduction of the per-cell loss over the critical cells (CE and MSE).
  Reduction reduction = Reduction::Mean;

  void validate() const;
};

/// Weight tuned for 2D road/vessel data.
inline constexpr double kLambdaWarp2D = 1e-4;
/// Weight tuned for 3D neuron (EM) data.
inline constexpr double kLambdaWarp3D = 2e-5;

struct LossTerm {
  double value = 0.0;
  std::vector<double> gradient;  // d value / d f, one entry per cell
};

struct LossReport {
  double l_dice = 0.0;
  double l_warp = 0.0;
  double l_total = 0.0;
  std::vector<double> gradient;  // d l_total / d f
  std::size_t critical_count = 0;
};

/// Cells strictly above 0.5 become FG.
Grid binarize(const LikelihoodMap& f);
Grid binarize(const LikelihoodMap& f, Adjacency adjacency);

/// Smoothed soft Dice loss over all cells:
/// 1 - (2 sum(f g) + s) / (sum(f) + sum(g) + s).
LossTerm soft_dice_loss(const LikelihoodMap& f, const Grid& g, double smooth);

/// Pixel loss between f and g restricted to the cells of `critical`. For
/// SoftDice the Dice loss is computed over the critical cells only. Empty
/// `critical` gives a zero value and a zero gradient.
LossTerm warping_loss(const LikelihoodMap& f, const Grid& g, const Grid& critical,
                      const LossConfig& config);
LossTerm warping_loss(const LikelihoodMap& f, const Grid& g, const CriticalMask& critical,
                      const LossConfig& config);

/// l_dice + lambda_warp * l_warp with the critical mask recomputed from
/// binarize(f) and held constant for differentiation.
LossReport total_loss(const LikelihoodMap& f, const Grid& g, const LossConfig& config,
                      const WarpConfig& warp_config = {});

/// Pairwise (cascade) summation; fixed association order for a given size.
double pairwise_sum(std::span<const double> values);

}  // namespace topowarp
