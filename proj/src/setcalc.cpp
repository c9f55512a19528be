#include "dproj/setcalc.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dproj/core.hpp"

namespace dproj {
namespace {

void guard_length(__int128 length, const char* op) {
  require(length >= 0 && length <= kMaxLineLength,
          std::string(op) + ": result would span more than 2^31 cells (overflow guard)");
}

void guard_index(__int128 v, const char* op) {
  constexpr __int128 kLimit = static_cast<__int128>(1) << 60;
  require(v > -kLimit && v < kLimit, std::string(op) + ": cell index out of range (overflow guard)");
}

GridSet1 sum_naive(const GridSet1& a, const GridSet1& b, SumSemantics sem) {
  const std::int64_t extra = sem == SumSemantics::kCover ? 1 : 0;
  BitLine out(a.offset() + b.offset(), a.length() + b.length() - 1 + extra);
  const auto bi = b.indices();
  a.for_each_index([&](std::int64_t i) {
    for (auto j : bi) {
      out.set(i + j);
      if (extra) out.set(i + j + 1);
    }
  });
  return GridSet1::from_bits(a.scale(), std::move(out));
}

GridSet1 sum_bitparallel(const GridSet1& a, const GridSet1& b, SumSemantics sem) {
  // Iterate over the runs of the operand with fewer runs.
  auto ra = a.runs();
  auto rb = b.runs();
  const bool swap = ra.size() < rb.size();
  const GridSet1& base = swap ? b : a;
  const auto& runs = swap ? ra : rb;
  const std::int64_t extra = sem == SumSemantics::kCover ? 1 : 0;
  BitLine out(a.offset() + b.offset(), a.length() + b.length() - 1 + extra);
  const BitLine base_bits = base.bits();
  for (const auto& r : runs) {
    const std::int64_t hi = r.hi + extra;
    if (hi == r.lo) {
      out.or_shifted(base_bits, r.lo);
    } else {
      out.or_shifted(spread(base, r.lo, hi), 0);
    }
  }
  return GridSet1::from_bits(a.scale(), std::move(out));
}

// Cells meeting the open interval (lo/den, hi/den) in cell units.
std::pair<std::int64_t, std::int64_t> open_cover(__int128 lo, __int128 hi, __int128 den) {
  return {static_cast<std::int64_t>(floor_div(lo, den)),
          static_cast<std::int64_t>(ceil_div(hi, den)) - 1};
}

// Marks [lo, hi] ranges then materialises them in one pass.
class RangeAccumulator {
 public:
  RangeAccumulator(std::int64_t lo, std::int64_t hi, const char* op) : lo_(lo) {
    guard_length(static_cast<__int128>(hi) - lo + 1, op);
    delta_.assign(static_cast<std::size_t>(hi - lo + 2), 0);
  }
  void add(std::int64_t a, std::int64_t b) {
    if (b < a) return;
    ++delta_[static_cast<std::size_t>(a - lo_)];
    --delta_[static_cast<std::size_t>(b - lo_ + 1)];
  }
  GridSet1 build(Scale scale) const {
    BitLine bits(lo_, static_cast<std::int64_t>(delta_.size()) - 1);
    std::int64_t depth = 0;
    std::int64_t start = 0;
    for (std::size_t k = 0; k + 1 < delta_.size(); ++k) {
      const std::int64_t before = depth;
      depth += delta_[k];
      if (before == 0 && depth > 0) start = static_cast<std::int64_t>(k);
      if (before > 0 && depth == 0) bits.set_range(lo_ + start, lo_ + static_cast<std::int64_t>(k) - 1);
    }
    if (depth > 0) bits.set_range(lo_ + start, lo_ + static_cast<std::int64_t>(delta_.size()) - 2);
    return GridSet1::from_bits(scale, std::move(bits));
  }

 private:
  std::int64_t lo_;
  std::vector<std::int32_t> delta_;
};

}  // namespace

GridSet1 sum(const GridSet1& a, const GridSet1& b, SumSemantics sem, SumAlgorithm algo) {
  require_same_scale(a.scale(), b.scale(), "sum");
  if (a.empty() || b.empty()) return GridSet1(a.scale());
  guard_index(static_cast<__int128>(a.max_index()) + b.max_index() + 1, "sum");
  guard_index(static_cast<__int128>(a.min_index()) + b.min_index(), "sum");
  guard_length(static_cast<__int128>(a.length()) + b.length(), "sum");
  return algo == SumAlgorithm::kNaive ? sum_naive(a, b, sem) : sum_bitparallel(a, b, sem);
}

GridSet1 reflect(const GridSet1& a, SumSemantics sem) {
  const std::int64_t shift = sem == SumSemantics::kCover ? -1 : 0;
  std::vector<std::int64_t> idx;
  idx.reserve(static_cast<std::size_t>(a.count()));
  a.for_each_index([&](std::int64_t i) { idx.push_back(-i + shift); });
  return GridSet1::from_indices(a.scale(), idx);
}

GridSet1 diff(const GridSet1& a, const GridSet1& b, SumSemantics sem, SumAlgorithm algo) {
  require_same_scale(a.scale(), b.scale(), "diff");
  return sum(a, reflect(b, sem), sem, algo);
}

GridSet1 dilate(const GridSet1& a, Rational x) {
  require(!x.is_zero(), "dilate: factor must be nonzero");
  if (a.empty()) return a;
  if (x == Rational(1)) return a;
  const __int128 p = x.num();
  const __int128 q = x.den();
  auto image = [&](const Run& r) {
    const __int128 u = p * r.lo;
    const __int128 v = p * (r.hi + 1);
    return open_cover(std::min(u, v), std::max(u, v), q);
  };
  const auto runs = a.runs();
  const auto first = image(runs.front());
  const auto last = image(runs.back());
  const std::int64_t lo = std::min(first.first, last.first);
  const std::int64_t hi = std::max(first.second, last.second);
  guard_index(lo, "dilate");
  guard_index(hi, "dilate");
  RangeAccumulator acc(lo, hi, "dilate");
  for (const auto& r : runs) {
    const auto [c0, c1] = image(r);
    acc.add(c0, c1);
  }
  return acc.build(a.scale());
}

GridSet1 nfold_sum(const GridSet1& a, int n_fold, SumSemantics sem) {
  require(n_fold >= 1, "nfold_sum: N must be >= 1");
  guard_length(static_cast<__int128>(a.length()) * n_fold + n_fold, "nfold_sum");
  GridSet1 acc = a;
  for (int k = 1; k < n_fold; ++k) acc = sum(acc, a, sem);
  return acc;
}

GridSet1 nfold_product(const GridSet1& a, int n_fold) {
  require(n_fold >= 1, "nfold_product: N must be >= 1");
  if (a.empty() || n_fold == 1) return a;
  const __int128 unit = a.scale().cells_per_unit();
  const auto a_runs = a.runs();
  GridSet1 acc = a;
  for (int k = 1; k < n_fold; ++k) {
    const auto p_runs = acc.runs();
    // Interval [u0, u1) * [v0, v1) in units of delta^2.
    auto product = [&](const Run& r, const Run& s) {
      const __int128 u0 = r.lo, u1 = r.hi + 1, v0 = s.lo, v1 = s.hi + 1;
      const __int128 c[4] = {u0 * v0, u0 * v1, u1 * v0, u1 * v1};
      return open_cover(*std::min_element(c, c + 4), *std::max_element(c, c + 4), unit);
    };
    const Run p_hull{acc.min_index(), acc.max_index()};
    const Run a_hull{a.min_index(), a.max_index()};
    const auto [lo, hi] = product(p_hull, a_hull);
    guard_index(lo, "nfold_product");
    guard_index(hi, "nfold_product");
    RangeAccumulator out(lo, hi, "nfold_product");
    for (const auto& r : p_runs)
      for (const auto& s : a_runs) {
        const auto [c0, c1] = product(r, s);
        out.add(c0, c1);
      }
    acc = out.build(a.scale());
  }
  return acc;
}

GridSet1 graph_sum(const GridSet2& g, Rational x, SumSemantics sem) {
  require(!g.empty(), "graph_sum: empty graph");
  require(sem == SumSemantics::kCover || x.is_integer(),
          "graph_sum: index semantics needs an integer x, got " + x.str());
  const __int128 p = x.num();
  const __int128 q = x.den();
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  for (std::int64_t y = g.offset_y(); y < g.offset_y() + g.height(); ++y) {
    for (const auto& r : g.row_runs(y)) {
      if (sem == SumSemantics::kIndex) {
        const __int128 s = p * y;
        guard_index(s + r.lo, "graph_sum");
        guard_index(s + r.hi, "graph_sum");
        ranges.emplace_back(static_cast<std::int64_t>(r.lo + s), static_cast<std::int64_t>(r.hi + s));
      } else {
        // [lo, hi+1) + x [y, y+1), in units 1/q.
        const __int128 u = p * y;
        const __int128 v = p * (y + 1);
        const __int128 lo = static_cast<__int128>(r.lo) * q + std::min(u, v);
        const __int128 hi = static_cast<__int128>(r.hi + 1) * q + std::max(u, v);
        guard_index(lo / q, "graph_sum");
        guard_index(hi / q, "graph_sum");
        ranges.push_back(open_cover(lo, hi, q));
      }
    }
  }
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [a, b] : ranges) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  RangeAccumulator acc(lo, hi, "graph_sum");
  for (const auto& [a, b] : ranges) acc.add(a, b);
  return acc.build(g.scale());
}

SumCounts sum_multiplicity(const GridSet1& a, const GridSet1& b) {
  require_same_scale(a.scale(), b.scale(), "sum_multiplicity");
  SumCounts out;
  if (a.empty() || b.empty()) return out;
  out.offset = a.offset() + b.offset();
  out.counts.assign(static_cast<std::size_t>(a.length() + b.length() - 1), 0);
  const auto bi = b.indices();
  a.for_each_index([&](std::int64_t i) {
    for (auto j : bi) ++out.counts[static_cast<std::size_t>(i + j - out.offset)];
  });
  return out;
}

}  // namespace dproj
