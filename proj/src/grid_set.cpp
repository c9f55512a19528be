#include "dproj/grid_set.hpp"

#include <algorithm>
#include <bit>

namespace dproj {
namespace {

std::size_t words_for(std::int64_t bits) { return static_cast<std::size_t>((bits + 63) / 64); }

// Copies bits [first, first + len) of src into a fresh word vector starting at bit 0.
std::vector<std::uint64_t> extract_bits(std::span<const std::uint64_t> src, std::int64_t first,
                                        std::int64_t len) {
  std::vector<std::uint64_t> out(words_for(len), 0);
  const std::int64_t word_shift = first / 64;
  const int bit_shift = static_cast<int>(first % 64);
  for (std::size_t w = 0; w < out.size(); ++w) {
    const std::size_t s = static_cast<std::size_t>(word_shift) + w;
    std::uint64_t v = s < src.size() ? src[s] >> bit_shift : 0;
    if (bit_shift != 0 && s + 1 < src.size()) v |= src[s + 1] << (64 - bit_shift);
    out[w] = v;
  }
  if (len % 64 != 0 && !out.empty()) out.back() &= (std::uint64_t{1} << (len % 64)) - 1;
  return out;
}

}  // namespace

BitLine::BitLine(std::int64_t offset, std::int64_t length)
    : offset_(offset), length_(length), words_(words_for(length), 0) {
  require(length >= 0, "BitLine: negative length");
}

void BitLine::set(std::int64_t index) {
  const std::int64_t k = index - offset_;
  words_[static_cast<std::size_t>(k / 64)] |= std::uint64_t{1} << (k % 64);
}

bool BitLine::test(std::int64_t index) const {
  const std::int64_t k = index - offset_;
  if (k < 0 || k >= length_) return false;
  return (words_[static_cast<std::size_t>(k / 64)] >> (k % 64)) & 1U;
}

void BitLine::set_range(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) return;
  std::int64_t a = lo - offset_;
  const std::int64_t b = hi - offset_;
  while (a <= b) {
    const std::int64_t w = a / 64;
    const int from = static_cast<int>(a % 64);
    const int to = static_cast<int>(std::min<std::int64_t>(b - w * 64, 63));
    const std::uint64_t mask =
        (to == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (to + 1)) - 1)) &
        ~((std::uint64_t{1} << from) - 1);
    words_[static_cast<std::size_t>(w)] |= mask;
    a = (w + 1) * 64;
  }
}

void BitLine::or_shifted(const BitLine& src, std::int64_t shift) {
  // Destination bit position of src bit 0.
  const std::int64_t start = src.offset_ + shift - offset_;
  if (src.length_ == 0) return;
  require(start >= 0 && start + src.length_ <= length_, "BitLine::or_shifted: out of range");
  const std::int64_t w0 = start / 64;
  const int b = static_cast<int>(start % 64);
  const auto& s = src.words_;
  auto* d = words_.data() + w0;
  if (b == 0) {
    for (std::size_t i = 0; i < s.size(); ++i) d[i] |= s[i];
  } else {
    const std::size_t limit = words_.size() - static_cast<std::size_t>(w0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      d[i] |= s[i] << b;
      if (i + 1 < limit) d[i + 1] |= s[i] >> (64 - b);
    }
  }
}

void BitLine::or_self_shifted(std::int64_t shift) {
  if (shift <= 0 || shift >= length_) return;
  const std::int64_t ws = shift / 64;
  const int b = static_cast<int>(shift % 64);
  const auto n = static_cast<std::int64_t>(words_.size());
  for (std::int64_t i = n - 1; i >= ws; --i) {
    std::uint64_t v = words_[static_cast<std::size_t>(i - ws)] << b;
    if (b != 0 && i - ws - 1 >= 0) v |= words_[static_cast<std::size_t>(i - ws - 1)] >> (64 - b);
    words_[static_cast<std::size_t>(i)] |= v;
  }
  if (length_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
}

GridSet1 GridSet1::from_bits(Scale scale, BitLine bits) {
  GridSet1 out(scale);
  const auto w = bits.words();
  std::int64_t first = -1;
  std::int64_t last = -1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0) {
      first = static_cast<std::int64_t>(i) * 64 + std::countr_zero(w[i]);
      break;
    }
  }
  if (first < 0) return out;
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] != 0) {
      last = static_cast<std::int64_t>(i) * 64 + 63 - std::countl_zero(w[i]);
      break;
    }
  }
  out.offset_ = bits.offset() + first;
  out.length_ = last - first + 1;
  out.words_ = first == 0 && words_for(out.length_) == w.size()
                   ? std::vector<std::uint64_t>(w.begin(), w.end())
                   : extract_bits(w, first, out.length_);
  std::int64_t count = 0;
  for (auto word : out.words_) count += std::popcount(word);
  out.count_ = count;
  return out;
}

GridSet1 GridSet1::from_indices(Scale scale, std::span<const std::int64_t> indices) {
  if (indices.empty()) return GridSet1(scale);
  const auto [lo, hi] = std::minmax_element(indices.begin(), indices.end());
  BitLine bits(*lo, *hi - *lo + 1);
  for (auto i : indices) bits.set(i);
  return from_bits(scale, std::move(bits));
}

GridSet1 GridSet1::from_runs(Scale scale, std::span<const Run> runs) {
  if (runs.empty()) return GridSet1(scale);
  std::int64_t lo = runs.front().lo;
  std::int64_t hi = runs.front().hi;
  for (const auto& r : runs) {
    require(r.lo <= r.hi, "GridSet1::from_runs: run with lo > hi");
    lo = std::min(lo, r.lo);
    hi = std::max(hi, r.hi);
  }
  BitLine bits(lo, hi - lo + 1);
  for (const auto& r : runs) bits.set_range(r.lo, r.hi);
  return from_bits(scale, std::move(bits));
}

bool GridSet1::contains(std::int64_t index) const {
  const std::int64_t k = index - offset_;
  if (k < 0 || k >= length_) return false;
  return (words_[static_cast<std::size_t>(k / 64)] >> (k % 64)) & 1U;
}

std::vector<std::int64_t> GridSet1::indices() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each_index([&](std::int64_t i) { out.push_back(i); });
  return out;
}

std::vector<Run> GridSet1::runs() const {
  std::vector<Run> out;
  for_each_index([&](std::int64_t i) {
    if (!out.empty() && out.back().hi + 1 == i) {
      out.back().hi = i;
    } else {
      out.push_back({i, i});
    }
  });
  return out;
}

BitLine GridSet1::bits() const {
  BitLine line(offset_, length_);
  std::copy(words_.begin(), words_.end(), line.words().begin());
  return line;
}

GridSet2 GridSet2::from_cells(Scale scale, std::span<const Cell2> cells) {
  GridSet2 out(scale);
  if (cells.empty()) return out;
  std::int64_t x0 = cells[0].x, x1 = cells[0].x, y0 = cells[0].y, y1 = cells[0].y;
  for (const auto& c : cells) {
    x0 = std::min(x0, c.x);
    x1 = std::max(x1, c.x);
    y0 = std::min(y0, c.y);
    y1 = std::max(y1, c.y);
  }
  out.ox_ = x0;
  out.oy_ = y0;
  out.width_ = x1 - x0 + 1;
  out.height_ = y1 - y0 + 1;
  out.words_per_row_ = static_cast<std::int64_t>(words_for(out.width_));
  out.words_.assign(static_cast<std::size_t>(out.words_per_row_ * out.height_), 0);
  for (const auto& c : cells) {
    const std::int64_t k = c.x - x0;
    auto& word = out.words_[static_cast<std::size_t>((c.y - y0) * out.words_per_row_ + k / 64)];
    word |= std::uint64_t{1} << (k % 64);
  }
  std::int64_t count = 0;
  for (auto w : out.words_) count += std::popcount(w);
  out.count_ = count;
  return out;
}

bool GridSet2::contains(std::int64_t x, std::int64_t y) const {
  const std::int64_t i = x - ox_;
  const std::int64_t j = y - oy_;
  if (i < 0 || j < 0 || i >= width_ || j >= height_) return false;
  return (words_[static_cast<std::size_t>(j * words_per_row_ + i / 64)] >> (i % 64)) & 1U;
}

std::vector<Cell2> GridSet2::cells() const {
  std::vector<Cell2> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each_cell([&](Cell2 c) { out.push_back(c); });
  return out;
}

std::vector<Run> GridSet2::row_runs(std::int64_t y) const {
  std::vector<Run> out;
  if (y < oy_ || y >= oy_ + height_) return out;
  std::int64_t start = -1;
  for (std::int64_t i = 0; i <= width_; ++i) {
    const bool on = i < width_ && contains(ox_ + i, y);
    if (on && start < 0) start = i;
    if (!on && start >= 0) {
      out.push_back({ox_ + start, ox_ + i - 1});
      start = -1;
    }
  }
  return out;
}

GridSet2 set_difference(const GridSet2& a, const GridSet2& b) {
  require_same_scale(a.scale(), b.scale(), "set_difference");
  std::vector<Cell2> keep;
  a.for_each_cell([&](Cell2 c) {
    if (!b.contains(c)) keep.push_back(c);
  });
  return GridSet2::from_cells(a.scale(), keep);
}

GridSet2 set_intersection(const GridSet2& a, const GridSet2& b) {
  require_same_scale(a.scale(), b.scale(), "set_intersection");
  std::vector<Cell2> keep;
  a.for_each_cell([&](Cell2 c) {
    if (b.contains(c)) keep.push_back(c);
  });
  return GridSet2::from_cells(a.scale(), keep);
}

GridSet1 set_intersection(const GridSet1& a, const GridSet1& b) {
  require_same_scale(a.scale(), b.scale(), "set_intersection");
  std::vector<std::int64_t> keep;
  a.for_each_index([&](std::int64_t i) {
    if (b.contains(i)) keep.push_back(i);
  });
  return GridSet1::from_indices(a.scale(), keep);
}

GridSet1 set_union(const GridSet1& a, const GridSet1& b) {
  require_same_scale(a.scale(), b.scale(), "set_union");
  if (a.empty()) return b;
  if (b.empty()) return a;
  const std::int64_t lo = std::min(a.min_index(), b.min_index());
  const std::int64_t hi = std::max(a.max_index(), b.max_index());
  BitLine line(lo, hi - lo + 1);
  line.or_shifted(a.bits(), 0);
  line.or_shifted(b.bits(), 0);
  return GridSet1::from_bits(a.scale(), std::move(line));
}

bool is_subset(const GridSet1& a, const GridSet1& b) {
  bool ok = a.scale() == b.scale() || a.empty();
  if (!ok) return false;
  a.for_each_index([&](std::int64_t i) { ok = ok && b.contains(i); });
  return ok;
}

bool is_subset(const GridSet2& a, const GridSet2& b) {
  bool ok = a.scale() == b.scale() || a.empty();
  if (!ok) return false;
  a.for_each_cell([&](Cell2 c) { ok = ok && b.contains(c); });
  return ok;
}

}  // namespace dproj
