#include "dproj/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dproj/random.hpp"

namespace dproj {
namespace {

std::int64_t to_index(Scale scale, Rational v, const char* name) {
  const __int128 scaled = static_cast<__int128>(v.num()) * scale.cells_per_unit();
  require(scaled % v.den() == 0, std::string("make_interval: endpoint ") + name + " = " +
                                     v.str() + " is not a multiple of delta = 2^-" +
                                     std::to_string(scale.depth()));
  return static_cast<std::int64_t>(scaled / v.den());
}

}  // namespace

GridSet1 make_interval(Scale scale, Rational lo, Rational hi) {
  require(lo < hi, "make_interval: need lo < hi, got " + lo.str() + " >= " + hi.str());
  const std::int64_t a = to_index(scale, lo, "lo");
  const std::int64_t b = to_index(scale, hi, "hi");
  const Run run{a, b - 1};
  return GridSet1::from_runs(scale, std::span(&run, 1));
}

GridSet1 make_progression(Scale scale, std::int64_t start, std::int64_t step, std::int64_t count) {
  require(count >= 1, "make_progression: count must be >= 1");
  require(step >= 1 || count == 1, "make_progression: step must be >= 1");
  std::vector<std::int64_t> idx;
  idx.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) idx.push_back(start + k * step);
  return GridSet1::from_indices(scale, idx);
}

GridSet1 gen_cantor(Scale scale, int base, std::span<const int> digits, int levels) {
  require(base >= 2, "gen_cantor: base must be >= 2");
  require(!digits.empty(), "gen_cantor: digit set is empty");
  std::vector<int> ds(digits.begin(), digits.end());
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  for (int d : ds) require(d >= 0 && d < base, "gen_cantor: digit " + std::to_string(d) +
                                                   " outside [0, base)");
  const std::int64_t cells = scale.cells_per_unit();
  if (levels <= 0) {
    levels = 0;
    std::int64_t p = 1;
    while (p * base <= cells) {
      p *= base;
      ++levels;
    }
  }
  std::int64_t width = 1;  // base^levels
  for (int l = 0; l < levels; ++l) {
    width *= base;
    require(width <= cells, "gen_cantor: base^levels = " + std::to_string(base) + "^" +
                                std::to_string(levels) + " exceeds 2^n = " +
                                std::to_string(cells) + " (misaligned scale)");
  }
  // Enumerate kept level-L interval indices.
  std::vector<std::int64_t> kept{0};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::int64_t> next;
    next.reserve(kept.size() * ds.size());
    for (auto k : kept)
      for (int d : ds) next.push_back(k * base + d);
    kept.swap(next);
  }
  BitLine bits(0, cells);
  for (auto k : kept) {
    const auto lo = static_cast<std::int64_t>(floor_div(static_cast<__int128>(k) * cells, width));
    const auto hi =
        static_cast<std::int64_t>(ceil_div(static_cast<__int128>(k + 1) * cells, width)) - 1;
    bits.set_range(lo, hi);
  }
  return GridSet1::from_bits(scale, std::move(bits));
}

GridSet1 gen_random_frostman(Scale scale, double kappa, std::uint64_t seed) {
  require(kappa > 0 && kappa <= 1, "gen_random_frostman: kappa must lie in (0, 1]");
  const double keep = std::exp2(kappa - 1.0);
  Rng rng(seed);
  for (;;) {
    std::vector<std::int64_t> level{0};
    for (int j = 0; j < scale.depth() && !level.empty(); ++j) {
      std::vector<std::int64_t> next;
      next.reserve(level.size() * 2);
      for (auto k : level) {
        for (std::int64_t child = 2 * k; child <= 2 * k + 1; ++child) {
          if (keep >= 1.0 || rng.uniform() < keep) next.push_back(child);
        }
      }
      level.swap(next);
    }
    if (!level.empty()) return GridSet1::from_indices(scale, level);
  }
}

BitLine spread(const GridSet1& s, std::int64_t lo, std::int64_t hi) {
  require(hi >= lo, "spread: empty offset range");
  const std::int64_t total = hi - lo + 1;
  BitLine out(s.offset() + lo, s.length() + total - 1);
  if (s.empty()) return out;
  out.or_shifted(s.bits(), lo);
  std::int64_t covered = 1;
  while (covered < total) {
    const std::int64_t step = std::min(covered, total - covered);
    out.or_self_shifted(step);
    covered += step;
  }
  return out;
}

GridSet1 neighborhood(const GridSet1& s, Rational r) {
  require(!(r < Rational(0)), "neighborhood: radius must be >= 0");
  const __int128 scaled = static_cast<__int128>(r.num()) * s.scale().cells_per_unit();
  require(scaled % r.den() == 0, "neighborhood: radius " + r.str() + " is not a multiple of delta");
  const auto m = static_cast<std::int64_t>(scaled / r.den());
  if (m == 0 || s.empty()) return s;
  return GridSet1::from_bits(s.scale(), spread(s, -m, m));
}

GridSet2 cartesian_product(const GridSet1& a, const GridSet1& b) {
  require_same_scale(a.scale(), b.scale(), "cartesian_product");
  std::vector<Cell2> cells;
  cells.reserve(static_cast<std::size_t>(a.count() * b.count()));
  const auto xs = a.indices();
  b.for_each_index([&](std::int64_t y) {
    for (auto x : xs) cells.push_back({x, y});
  });
  return GridSet2::from_cells(a.scale(), cells);
}

GridSet1 coordinate_shadow(const GridSet2& e, int axis) {
  require(axis == 0 || axis == 1, "coordinate_shadow: axis must be 0 or 1");
  std::vector<std::int64_t> idx;
  e.for_each_cell([&](Cell2 c) { idx.push_back(axis == 0 ? c.x : c.y); });
  return GridSet1::from_indices(e.scale(), idx);
}

}  // namespace dproj
