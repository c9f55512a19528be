#pragma once

#include <cstdint>
#include <vector>

#include "dproj/grid_set.hpp"

namespace dproj {

/// Probability measure on the cells of a 1D grid; weights[k] is the mass of
/// cell offset + k. The support is trimmed: first and last weights are > 0.
class DyadicMeasure1 {
 public:
  DyadicMeasure1() = default;
  /// Validates nonnegativity and total mass 1 (relative tolerance 2^-40), then trims.
  DyadicMeasure1(Scale scale, std::int64_t offset, std::vector<double> weights);

  [[nodiscard]] Scale scale() const { return scale_; }
  [[nodiscard]] std::int64_t offset() const { return offset_; }
  [[nodiscard]] std::int64_t length() const { return static_cast<std::int64_t>(weights_.size()); }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double weight(std::int64_t index) const;
  [[nodiscard]] GridSet1 support() const;
  [[nodiscard]] std::int64_t support_size() const;
  [[nodiscard]] double total() const;

  friend bool operator==(const DyadicMeasure1&, const DyadicMeasure1&) = default;

 private:
  Scale scale_;
  std::int64_t offset_ = 0;
  std::vector<double> weights_;
};

/// Probability measure on the cells of a 2D grid, row-major by y.
class DyadicMeasure2 {
 public:
  DyadicMeasure2() = default;
  DyadicMeasure2(Scale scale, std::int64_t ox, std::int64_t oy, std::int64_t width,
                 std::int64_t height, std::vector<double> weights);

  [[nodiscard]] Scale scale() const { return scale_; }
  [[nodiscard]] std::int64_t offset_x() const { return ox_; }
  [[nodiscard]] std::int64_t offset_y() const { return oy_; }
  [[nodiscard]] std::int64_t width() const { return width_; }
  [[nodiscard]] std::int64_t height() const { return height_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double weight(std::int64_t x, std::int64_t y) const;
  [[nodiscard]] GridSet2 support() const;
  [[nodiscard]] std::int64_t support_size() const;

  template <typename Fn>
  void for_each_atom(Fn&& fn) const {
    for (std::int64_t j = 0; j < height_; ++j) {
      for (std::int64_t i = 0; i < width_; ++i) {
        const double w = weights_[static_cast<std::size_t>(j * width_ + i)];
        if (w > 0) fn(Cell2{ox_ + i, oy_ + j}, w);
      }
    }
  }

  friend bool operator==(const DyadicMeasure2&, const DyadicMeasure2&) = default;

 private:
  Scale scale_;
  std::int64_t ox_ = 0;
  std::int64_t oy_ = 0;
  std::int64_t width_ = 0;
  std::int64_t height_ = 0;
  std::vector<double> weights_;
};

/// Total-mass tolerance for measure invariants.
inline constexpr double kMassTolerance = 0x1.0p-40;

}  // namespace dproj
