#include "dproj/measure_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dproj/summation.hpp"

namespace dproj {
namespace {

double checked_total(const std::vector<double>& w) {
  for (double v : w) {
    require(std::isfinite(v) && v >= 0, "measure weights must be finite and nonnegative");
  }
  const double total = compensated_sum(w);
  require(std::abs(total - 1.0) <= kMassTolerance,
          "measure weights must sum to 1 (got " + std::to_string(total) + ")");
  return total;
}

}  // namespace

DyadicMeasure1::DyadicMeasure1(Scale scale, std::int64_t offset, std::vector<double> weights)
    : scale_(scale), offset_(offset) {
  checked_total(weights);
  const auto first = std::find_if(weights.begin(), weights.end(), [](double v) { return v > 0; });
  const auto last = std::find_if(weights.rbegin(), weights.rend(), [](double v) { return v > 0; });
  const auto lo = first - weights.begin();
  const auto hi = weights.rend() - last;  // one past the last positive entry
  offset_ = offset + lo;
  weights_.assign(weights.begin() + lo, weights.begin() + hi);
}

double DyadicMeasure1::weight(std::int64_t index) const {
  const std::int64_t k = index - offset_;
  if (k < 0 || k >= length()) return 0;
  return weights_[static_cast<std::size_t>(k)];
}

GridSet1 DyadicMeasure1::support() const {
  std::vector<std::int64_t> idx;
  for (std::size_t k = 0; k < weights_.size(); ++k)
    if (weights_[k] > 0) idx.push_back(offset_ + static_cast<std::int64_t>(k));
  return GridSet1::from_indices(scale_, idx);
}

std::int64_t DyadicMeasure1::support_size() const {
  return std::count_if(weights_.begin(), weights_.end(), [](double v) { return v > 0; });
}

double DyadicMeasure1::total() const { return compensated_sum(weights_); }

DyadicMeasure2::DyadicMeasure2(Scale scale, std::int64_t ox, std::int64_t oy, std::int64_t width,
                               std::int64_t height, std::vector<double> weights)
    : scale_(scale) {
  require(width >= 0 && height >= 0 &&
              static_cast<std::int64_t>(weights.size()) == width * height,
          "DyadicMeasure2: weight array does not match width*height");
  checked_total(weights);
  std::int64_t x0 = width, x1 = -1, y0 = height, y1 = -1;
  for (std::int64_t j = 0; j < height; ++j)
    for (std::int64_t i = 0; i < width; ++i)
      if (weights[static_cast<std::size_t>(j * width + i)] > 0) {
        x0 = std::min(x0, i);
        x1 = std::max(x1, i);
        y0 = std::min(y0, j);
        y1 = std::max(y1, j);
      }
  ox_ = ox + x0;
  oy_ = oy + y0;
  width_ = x1 - x0 + 1;
  height_ = y1 - y0 + 1;
  weights_.resize(static_cast<std::size_t>(width_ * height_));
  for (std::int64_t j = 0; j < height_; ++j)
    for (std::int64_t i = 0; i < width_; ++i)
      weights_[static_cast<std::size_t>(j * width_ + i)] =
          weights[static_cast<std::size_t>((j + y0) * width + (i + x0))];
}

double DyadicMeasure2::weight(std::int64_t x, std::int64_t y) const {
  const std::int64_t i = x - ox_;
  const std::int64_t j = y - oy_;
  if (i < 0 || j < 0 || i >= width_ || j >= height_) return 0;
  return weights_[static_cast<std::size_t>(j * width_ + i)];
}

GridSet2 DyadicMeasure2::support() const {
  std::vector<Cell2> cells;
  for_each_atom([&](Cell2 c, double) { cells.push_back(c); });
  return GridSet2::from_cells(scale_, cells);
}

std::int64_t DyadicMeasure2::support_size() const {
  return std::count_if(weights_.begin(), weights_.end(), [](double v) { return v > 0; });
}

}  // namespace dproj
