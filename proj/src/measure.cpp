#include "dproj/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "dproj/parallel.hpp"
#include "dproj/summation.hpp"

namespace dproj {
namespace {

struct Atom1 {
  std::int64_t index;
  double weight;
};

std::vector<Atom1> atoms_of(const DyadicMeasure1& mu) {
  std::vector<Atom1> out;
  const auto& w = mu.weights();
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0) out.push_back({mu.offset() + static_cast<std::int64_t>(k), w[k]});
  return out;
}

double energy_direct_1d(const DyadicMeasure1& mu, double s, int threads) {
  const auto atoms = atoms_of(mu);
  // Kernel by index distance, distance 0 floored at one cell.
  std::vector<double> kernel(static_cast<std::size_t>(mu.length()));
  for (std::size_t m = 0; m < kernel.size(); ++m)
    kernel[m] = std::pow(static_cast<double>(std::max<std::size_t>(m, 1)), -s);
  std::vector<double> rows(atoms.size());
  parallel_for(atoms.size(), threads, [&](std::size_t p) {
    CompensatedSum row;
    for (const auto& q : atoms)
      row.add(q.weight * kernel[static_cast<std::size_t>(std::abs(q.index - atoms[p].index))]);
    rows[p] = atoms[p].weight * row.value();
  });
  return compensated_sum(rows) * std::pow(mu.scale().delta(), -s);
}

double energy_binned_1d(const DyadicMeasure1& mu, double s, int threads) {
  const auto& w = mu.weights();
  const auto len = static_cast<std::int64_t>(w.size());
  std::vector<double> prefix(w.size() + 1, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) prefix[i + 1] = prefix[i] + w[i];
  auto range = [&](std::int64_t lo, std::int64_t hi) {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, len - 1);
    return hi < lo ? 0.0 : prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)];
  };
  int kmax = 0;
  while ((std::int64_t{1} << kmax) < len) ++kmax;
  std::vector<double> rows(w.size(), 0.0);
  parallel_for(w.size(), threads, [&](std::size_t ip) {
    if (w[ip] <= 0) return;
    const auto i = static_cast<std::int64_t>(ip);
    CompensatedSum row;
    row.add(w[ip]);  // d(p,p) = delta
    for (int k = 0; k <= kmax; ++k) {
      const std::int64_t a = std::int64_t{1} << k;
      const std::int64_t b = (std::int64_t{1} << (k + 1)) - 1;
      const double mass = range(i - b, i - a) + range(i + a, i + b);
      row.add(mass * std::pow(static_cast<double>(a), -s));
    }
    rows[ip] = w[ip] * row.value();
  });
  return compensated_sum(rows) * std::pow(mu.scale().delta(), -s);
}

struct Atom2 {
  std::int64_t x, y;
  double weight;
};

double energy_direct_2d(const DyadicMeasure2& mu, double s, int threads) {
  std::vector<Atom2> atoms;
  mu.for_each_atom([&](Cell2 c, double w) { atoms.push_back({c.x, c.y, w}); });
  std::vector<double> rows(atoms.size());
  const double half = -0.5 * s;
  parallel_for(atoms.size(), threads, [&](std::size_t p) {
    CompensatedSum row;
    for (const auto& q : atoms) {
      const double dx = static_cast<double>(q.x - atoms[p].x);
      const double dy = static_cast<double>(q.y - atoms[p].y);
      const double d2 = std::max(1.0, dx * dx + dy * dy);
      row.add(q.weight * std::pow(d2, half));
    }
    rows[p] = atoms[p].weight * row.value();
  });
  return compensated_sum(rows) * std::pow(mu.scale().delta(), -s);
}

double energy_binned_2d(const DyadicMeasure2& mu, double s, int threads) {
  const std::int64_t w = mu.width(), h = mu.height();
  std::vector<double> prefix(static_cast<std::size_t>((w + 1) * (h + 1)), 0.0);
  auto at = [&](std::int64_t i, std::int64_t j) -> double& {
    return prefix[static_cast<std::size_t>(j * (w + 1) + i)];
  };
  for (std::int64_t j = 0; j < h; ++j)
    for (std::int64_t i = 0; i < w; ++i)
      at(i + 1, j + 1) = mu.weights()[static_cast<std::size_t>(j * w + i)] + at(i, j + 1) +
                         at(i + 1, j) - at(i, j);
  auto square = [&](std::int64_t ci, std::int64_t cj, std::int64_t r) {
    const std::int64_t x0 = std::max<std::int64_t>(ci - r, 0), x1 = std::min(ci + r, w - 1);
    const std::int64_t y0 = std::max<std::int64_t>(cj - r, 0), y1 = std::min(cj + r, h - 1);
    if (x1 < x0 || y1 < y0) return 0.0;
    return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
  };
  int kmax = 0;
  while ((std::int64_t{1} << kmax) < std::max(w, h)) ++kmax;
  std::vector<double> rows(static_cast<std::size_t>(w * h), 0.0);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const double wp = mu.weights()[idx];
    if (wp <= 0) return;
    const auto i = static_cast<std::int64_t>(idx) % w;
    const auto j = static_cast<std::int64_t>(idx) / w;
    CompensatedSum row;
    row.add(wp);
    for (int k = 0; k <= kmax; ++k) {
      const std::int64_t a = std::int64_t{1} << k;
      const double mass = square(i, j, 2 * a - 1) - square(i, j, a - 1);
      row.add(mass * std::pow(static_cast<double>(a), -s));
    }
    rows[idx] = wp * row.value();
  });
  return compensated_sum(rows) * std::pow(mu.scale().delta(), -s);
}

std::int64_t cube_of(std::int64_t cell, int shift) {
  return static_cast<std::int64_t>(floor_div(cell, static_cast<__int128>(1) << shift));
}

}  // namespace

DyadicMeasure1 uniform_on(const GridSet1& s) {
  require(!s.empty(), "uniform_on: empty set");
  std::vector<double> w(static_cast<std::size_t>(s.length()), 0.0);
  const double v = 1.0 / static_cast<double>(s.count());
  s.for_each_index([&](std::int64_t i) { w[static_cast<std::size_t>(i - s.offset())] = v; });
  return DyadicMeasure1(s.scale(), s.offset(), std::move(w));
}

DyadicMeasure2 uniform_on(const GridSet2& s) {
  require(!s.empty(), "uniform_on: empty set");
  std::vector<double> w(static_cast<std::size_t>(s.width() * s.height()), 0.0);
  const double v = 1.0 / static_cast<double>(s.count());
  s.for_each_cell([&](Cell2 c) {
    w[static_cast<std::size_t>((c.y - s.offset_y()) * s.width() + (c.x - s.offset_x()))] = v;
  });
  return DyadicMeasure2(s.scale(), s.offset_x(), s.offset_y(), s.width(), s.height(), std::move(w));
}

double riesz_energy(const DyadicMeasure1& mu, double s, EnergyMethod method, int threads) {
  require(s > 0, "riesz_energy: s must be positive");
  if (method == EnergyMethod::kAuto)
    method = mu.support_size() <= kDirectEnergyLimit ? EnergyMethod::kDirect : EnergyMethod::kBinned;
  return method == EnergyMethod::kDirect ? energy_direct_1d(mu, s, threads)
                                         : energy_binned_1d(mu, s, threads);
}

double riesz_energy(const DyadicMeasure2& mu, double s, EnergyMethod method, int threads) {
  require(s > 0, "riesz_energy: s must be positive");
  if (method == EnergyMethod::kAuto)
    method = mu.support_size() <= kDirectEnergyLimit ? EnergyMethod::kDirect : EnergyMethod::kBinned;
  return method == EnergyMethod::kDirect ? energy_direct_2d(mu, s, threads)
                                         : energy_binned_2d(mu, s, threads);
}

double energy_from_nonconcentration_constant(double t, double kappa) {
  require(t > 0 && t < kappa, "energy constant needs 0 < t < kappa");
  return std::exp2(kappa + 1.0) / (1.0 - std::exp2(t - kappa));
}

PruneResult prune_heavy_cubes(const DyadicMeasure1& mu, double s, double k_const, double l_const,
                              bool strict) {
  require(k_const >= 1 && l_const >= 1, "prune_heavy_cubes: K and L must be >= 1");
  require(s > 0, "prune_heavy_cubes: s must be positive");
  const int n = mu.scale().depth();
  const auto atoms = atoms_of(mu);
  std::vector<bool> removed(atoms.size(), false);
  PruneResult out;
  out.removed_cubes_per_level.assign(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    const double threshold = k_const * l_const * std::exp2(-j * s / 2);
    const int shift = n - j;
    std::size_t a = 0;
    while (a < atoms.size()) {
      const std::int64_t cube = cube_of(atoms[a].index, shift);
      std::size_t b = a;
      CompensatedSum mass;
      while (b < atoms.size() && cube_of(atoms[b].index, shift) == cube) mass.add(atoms[b++].weight);
      const bool heavy = strict ? mass.value() > threshold : mass.value() >= threshold;
      if (heavy) {
        ++out.removed_cubes_per_level[static_cast<std::size_t>(j)];
        for (std::size_t k = a; k < b; ++k) removed[k] = true;
      }
      a = b;
    }
    out.level_sum += std::exp2(-j * s / 2);
  }
  CompensatedSum gone;
  std::vector<std::int64_t> kept;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (removed[k]) {
      gone.add(atoms[k].weight);
    } else {
      kept.push_back(atoms[k].index);
    }
  }
  out.kept = GridSet1::from_indices(mu.scale(), kept);
  out.removed_mass = gone.value();
  out.energy = riesz_energy(mu, s);
  out.measured_c = out.energy > 0 && out.level_sum > 0
                       ? out.removed_mass * k_const * l_const / (out.energy * out.level_sum)
                       : 0.0;
  return out;
}

DyadicMeasure1 condition(const DyadicMeasure1& mu, const GridSet1& s) {
  require_same_scale(mu.scale(), s.scale(), "condition");
  std::vector<double> w(mu.weights().size(), 0.0);
  CompensatedSum mass;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (s.contains(mu.offset() + static_cast<std::int64_t>(k))) {
      w[k] = mu.weights()[k];
      mass.add(w[k]);
    }
  }
  require(mass.value() > 0, "condition: the conditioning set has zero mass");
  for (auto& v : w) v /= mass.value();
  return DyadicMeasure1(mu.scale(), mu.offset(), std::move(w));
}

DyadicMeasure2 condition(const DyadicMeasure2& mu, const GridSet2& s) {
  require_same_scale(mu.scale(), s.scale(), "condition");
  std::vector<double> w(mu.weights().size(), 0.0);
  CompensatedSum mass;
  for (std::int64_t j = 0; j < mu.height(); ++j)
    for (std::int64_t i = 0; i < mu.width(); ++i) {
      const auto k = static_cast<std::size_t>(j * mu.width() + i);
      if (s.contains(mu.offset_x() + i, mu.offset_y() + j)) {
        w[k] = mu.weights()[k];
        mass.add(w[k]);
      }
    }
  require(mass.value() > 0, "condition: the conditioning set has zero mass");
  for (auto& v : w) v /= mass.value();
  return DyadicMeasure2(mu.scale(), mu.offset_x(), mu.offset_y(), mu.width(), mu.height(),
                        std::move(w));
}

DyadicMeasure1 pushforward_affine(const DyadicMeasure1& mu, Rational a, Rational b,
                                  std::optional<int> out_depth) {
  require(!a.is_zero(), "pushforward_affine: a must be nonzero");
  const int n = mu.scale().depth();
  int depth = n;
  if (out_depth) {
    depth = *out_depth;
  } else {
    // floor(log2 |a|) from the exact fraction.
    const double l2 = std::log2(std::abs(a.to_double()));
    int f = static_cast<int>(std::floor(l2));
    const __int128 an = a.num() < 0 ? -static_cast<__int128>(a.num()) : a.num();
    auto pow2_le = [&](int e) {  // 2^e <= |a| exactly
      return e >= 0 ? (static_cast<__int128>(1) << e) * a.den() <= an
                    : static_cast<__int128>(a.den()) <= an << (-e);
    };
    while (!pow2_le(f)) --f;
    while (pow2_le(f + 1)) ++f;
    depth = std::clamp(n - f, 0, kMaxDepth + 1);
  }
  require(depth >= 0 && depth <= kMaxDepth,
          "pushforward_affine: target depth " + std::to_string(depth) + " exceeds the scale cap");
  // Image of centre (2k+1)/2^(n+1) at depth d: floor((a (2k+1)/2^(n+1) + b) 2^d).
  const __int128 p = a.num(), q = a.den(), r = b.num(), t = b.den();
  const int e = n + 1 - depth;  // >= 1 whenever depth <= n
  auto target = [&](std::int64_t k) -> std::int64_t {
    __int128 num = p * t * (2 * static_cast<__int128>(k) + 1) +
                   (r * q << (n + 1));
    __int128 den = q * t;
    if (e >= 0) {
      den <<= e;
    } else {
      require(e > -40, "pushforward_affine: target depth too fine");
      num <<= -e;
    }
    return static_cast<std::int64_t>(floor_div(num, den));
  };
  std::vector<std::pair<std::int64_t, double>> moved;
  const auto& w = mu.weights();
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0) moved.emplace_back(target(mu.offset() + static_cast<std::int64_t>(k)), w[k]);
  std::int64_t lo = moved.front().first, hi = moved.front().first;
  for (const auto& [c, _] : moved) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  require(hi - lo < (std::int64_t{1} << 31), "pushforward_affine: image too wide");
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [c, v] : moved) out[static_cast<std::size_t>(c - lo)] += v;
  return DyadicMeasure1(Scale(depth), lo, std::move(out));
}

GridSet1 MaximalIntervalResult::as_set(Scale scale) const {
  const Run run{first_cell, first_cell + cell_count - 1};
  return GridSet1::from_runs(scale, std::span(&run, 1));
}

MaximalIntervalResult maximal_interval(const DyadicMeasure1& mu, double kappa) {
  const int n = mu.scale().depth();
  const std::int64_t cells = mu.scale().cells_per_unit();
  require(mu.offset() >= 0 && mu.offset() + mu.length() <= cells,
          "maximal_interval: measure must be supported in [0, 1)");
  std::vector<double> prefix(static_cast<std::size_t>(cells) + 1, 0.0);
  for (std::int64_t i = 0; i < cells; ++i)
    prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + mu.weight(i);
  MaximalIntervalResult best;
  best.m_value = -1;
  for (int j = 0; j <= n; ++j) {
    const std::int64_t len = std::int64_t{1} << (n - j);
    const double r = std::exp2(-j);
    const double scale = std::pow(r, -kappa / 2);
    for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
      const double mass = prefix[static_cast<std::size_t>((k + 1) * len)] -
                          prefix[static_cast<std::size_t>(k * len)];
      const double m = mass * scale;
      if (m > best.m_value) {
        best.level = j;
        best.index = k;
        best.r0 = r;
        best.m_value = m;
        best.mass = mass;
        best.x0 = static_cast<double>(k) * r;
        best.first_cell = k * len;
        best.cell_count = len;
      }
    }
  }
  std::int64_t gap = 0;
  while (gap < best.cell_count && mu.weight(best.first_cell + gap) <= 0) ++gap;
  best.support_gap = gap;
  return best;
}

Renormalization renormalize(const DyadicMeasure1& mu, double kappa) {
  Renormalization out;
  out.interval = maximal_interval(mu, kappa);
  const auto& iv = out.interval;
  const auto conditioned = condition(mu, iv.as_set(mu.scale()));
  // h(t) = 2^level t - index maps I0 onto [0, 1).
  out.nu = pushforward_affine(conditioned, Rational(std::int64_t{1} << iv.level), Rational(-iv.index),
                              mu.scale().depth() - iv.level);
  out.degenerate = iv.cell_count == 1;
  return out;
}

}  // namespace dproj
