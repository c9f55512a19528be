#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dproj/scale.hpp"

namespace dproj {

/// Inclusive run of consecutive cell indices.
struct Run {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  [[nodiscard]] std::int64_t size() const { return hi - lo + 1; }
  friend bool operator==(const Run&, const Run&) = default;
};

/// Word-packed bit array anchored at an absolute cell index. Used as the
/// mutable scratch form while building sets; GridSet1 is its trimmed,
/// immutable counterpart.
class BitLine {
 public:
  BitLine() = default;
  BitLine(std::int64_t offset, std::int64_t length);

  [[nodiscard]] std::int64_t offset() const { return offset_; }
  [[nodiscard]] std::int64_t length() const { return length_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }
  [[nodiscard]] std::span<std::uint64_t> words() { return words_; }

  void set(std::int64_t index);
  /// Sets every absolute index in [lo, hi]; the range must lie inside the line.
  void set_range(std::int64_t lo, std::int64_t hi);
  [[nodiscard]] bool test(std::int64_t index) const;
  /// this |= (src shifted so that src's bit k lands on absolute index src.offset + k + shift).
  void or_shifted(const BitLine& src, std::int64_t shift);
  /// this |= this shifted up by `shift` positions (bits pushed past the end are dropped).
  void or_self_shifted(std::int64_t shift);

 private:
  std::int64_t offset_ = 0;
  std::int64_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Finite union of half-open cells [k*delta, (k+1)*delta) on the line, stored
/// trimmed: when nonempty, the first and last stored bits are set.
class GridSet1 {
 public:
  GridSet1() = default;
  explicit GridSet1(Scale scale) : scale_(scale) {}

  static GridSet1 from_indices(Scale scale, std::span<const std::int64_t> indices);
  static GridSet1 from_runs(Scale scale, std::span<const Run> runs);
  static GridSet1 from_bits(Scale scale, BitLine bits);

  [[nodiscard]] Scale scale() const { return scale_; }
  [[nodiscard]] bool empty() const { return length_ == 0; }
  [[nodiscard]] std::int64_t offset() const { return offset_; }
  [[nodiscard]] std::int64_t length() const { return length_; }
  [[nodiscard]] std::int64_t min_index() const { return offset_; }
  [[nodiscard]] std::int64_t max_index() const { return offset_ + length_ - 1; }
  [[nodiscard]] std::int64_t count() const { return count_; }
  [[nodiscard]] double measure() const { return static_cast<double>(count_) * scale_.delta(); }
  /// Distance from the left edge of the first cell to the right edge of the last.
  [[nodiscard]] double diameter() const { return static_cast<double>(length_) * scale_.delta(); }
  [[nodiscard]] bool contains(std::int64_t index) const;

  [[nodiscard]] std::vector<std::int64_t> indices() const;
  [[nodiscard]] std::vector<Run> runs() const;
  [[nodiscard]] BitLine bits() const;
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

  template <typename Fn>
  void for_each_index(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        const int bit = __builtin_ctzll(word);
        fn(offset_ + static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(bit)));
        word &= word - 1;
      }
    }
  }

  friend bool operator==(const GridSet1&, const GridSet1&) = default;

 private:
  Scale scale_;
  std::int64_t offset_ = 0;
  std::int64_t length_ = 0;
  std::int64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

struct Cell2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const Cell2&, const Cell2&) = default;
};

/// Finite union of delta-squares; cell (x, y) has lower-left corner
/// (x*delta, y*delta). Rows are indexed by y, stored row-major and trimmed.
class GridSet2 {
 public:
  GridSet2() = default;
  explicit GridSet2(Scale scale) : scale_(scale) {}

  static GridSet2 from_cells(Scale scale, std::span<const Cell2> cells);

  [[nodiscard]] Scale scale() const { return scale_; }
  [[nodiscard]] bool empty() const { return count_ == 0; }
  [[nodiscard]] std::int64_t offset_x() const { return ox_; }
  [[nodiscard]] std::int64_t offset_y() const { return oy_; }
  [[nodiscard]] std::int64_t width() const { return width_; }
  [[nodiscard]] std::int64_t height() const { return height_; }
  [[nodiscard]] std::int64_t count() const { return count_; }
  [[nodiscard]] double measure() const {
    return static_cast<double>(count_) * scale_.delta() * scale_.delta();
  }
  [[nodiscard]] bool contains(std::int64_t x, std::int64_t y) const;
  [[nodiscard]] bool contains(Cell2 c) const { return contains(c.x, c.y); }

  /// Cells sorted by (y, x).
  [[nodiscard]] std::vector<Cell2> cells() const;
  /// Runs of absolute x indices in absolute row y.
  [[nodiscard]] std::vector<Run> row_runs(std::int64_t y) const;

  template <typename Fn>
  void for_each_cell(Fn&& fn) const {
    for (std::int64_t r = 0; r < height_; ++r) {
      const std::uint64_t* row = words_.data() + r * words_per_row_;
      for (std::int64_t w = 0; w < words_per_row_; ++w) {
        std::uint64_t word = row[w];
        while (word != 0) {
          const int bit = __builtin_ctzll(word);
          fn(Cell2{ox_ + w * 64 + bit, oy_ + r});
          word &= word - 1;
        }
      }
    }
  }

  friend bool operator==(const GridSet2&, const GridSet2&) = default;

 private:
  Scale scale_;
  std::int64_t ox_ = 0;
  std::int64_t oy_ = 0;
  std::int64_t width_ = 0;
  std::int64_t height_ = 0;
  std::int64_t words_per_row_ = 0;
  std::int64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Cells that are in `a` but not in `b` (same scale).
GridSet2 set_difference(const GridSet2& a, const GridSet2& b);
/// Cells in both.
GridSet2 set_intersection(const GridSet2& a, const GridSet2& b);
GridSet1 set_intersection(const GridSet1& a, const GridSet1& b);
GridSet1 set_union(const GridSet1& a, const GridSet1& b);
/// True when every cell of `a` is a cell of `b`.
bool is_subset(const GridSet1& a, const GridSet1& b);
bool is_subset(const GridSet2& a, const GridSet2& b);

}  // namespace dproj
