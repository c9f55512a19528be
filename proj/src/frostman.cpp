#include "dproj/frostman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace dproj {
namespace {

int covering_power(std::int64_t extent) {
  int k = 0;
  while ((std::int64_t{1} << k) < extent) ++k;
  return k;
}

// Scans a dense 1D mass profile. `mass_unit` converts profile units into the
// report's convention.
FrostmanReport scan_1d(const std::vector<double>& mass, std::int64_t offset, Scale scale,
                       double kappa, double mass_unit, MassConvention convention) {
  const auto len = static_cast<std::int64_t>(mass.size());
  std::vector<double> prefix(mass.size() + 1, 0.0);
  for (std::size_t i = 0; i < mass.size(); ++i) prefix[i + 1] = prefix[i] + mass[i];
  auto at = [&](std::int64_t i) { return i >= 0 && i < len ? mass[static_cast<std::size_t>(i)] : 0.0; };
  auto range = [&](std::int64_t lo, std::int64_t hi) {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, len - 1);
    return hi < lo ? 0.0 : prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)];
  };

  FrostmanReport rep;
  rep.kappa = kappa;
  rep.convention = convention;
  rep.dimension = 1;
  rep.constant = -1;
  const int kmax = covering_power(len);
  const double delta = scale.delta();
  for (int k = 0; k <= kmax; ++k) {
    const std::int64_t m = std::int64_t{1} << k;
    const double r = static_cast<double>(m) * delta;
    const double rk = std::pow(r, kappa);
    for (std::int64_t i = 0; i < len; ++i) {
      if (mass[static_cast<std::size_t>(i)] <= 0) continue;
      const double inside = range(i - m + 1, i + m - 1) + 0.5 * (at(i - m) + at(i + m));
      const double value = inside * mass_unit;
      const double ratio = value / rk;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.witness_center = {offset + i, 0};
        rep.witness_radius = r;
        rep.witness_mass = value;
      }
    }
  }
  return rep;
}

template <typename T>
class Prefix2 {
 public:
  Prefix2(std::int64_t w, std::int64_t h) : w_(w), h_(h), data_(static_cast<std::size_t>((w + 1) * (h + 1)), T{}) {}
  T& cell(std::int64_t i, std::int64_t j) { return data_[static_cast<std::size_t>((j + 1) * (w_ + 1) + (i + 1))]; }
  void integrate() {
    for (std::int64_t j = 1; j <= h_; ++j)
      for (std::int64_t i = 1; i <= w_; ++i) {
        auto& v = data_[static_cast<std::size_t>(j * (w_ + 1) + i)];
        v += data_[static_cast<std::size_t>((j - 1) * (w_ + 1) + i)] +
             data_[static_cast<std::size_t>(j * (w_ + 1) + i - 1)] -
             data_[static_cast<std::size_t>((j - 1) * (w_ + 1) + i - 1)];
      }
  }
  // Sum over [x0, x1] x [y0, y1], clipped.
  double rect(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1) const {
    x0 = std::max<std::int64_t>(x0, 0);
    y0 = std::max<std::int64_t>(y0, 0);
    x1 = std::min(x1, w_ - 1);
    y1 = std::min(y1, h_ - 1);
    if (x1 < x0 || y1 < y0) return 0.0;
    auto at = [&](std::int64_t i, std::int64_t j) {
      return data_[static_cast<std::size_t>(j * (w_ + 1) + i)];
    };
    return static_cast<double>(at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0));
  }

 private:
  std::int64_t w_, h_;
  std::vector<T> data_;
};

template <typename T, typename Occupied>
FrostmanReport scan_2d(const Prefix2<T>& p, std::int64_t w, std::int64_t h, std::int64_t ox,
                       std::int64_t oy, Occupied&& occupied, Scale scale, double kappa,
                       double mass_unit, MassConvention convention) {
  FrostmanReport rep;
  rep.kappa = kappa;
  rep.convention = convention;
  rep.dimension = 2;
  rep.constant = -1;
  const int kmax = covering_power(std::max(w, h));
  const double delta = scale.delta();
  for (int k = 0; k <= kmax; ++k) {
    const std::int64_t m = std::int64_t{1} << k;
    const double r = static_cast<double>(m) * delta;
    const double rk = std::pow(r, kappa);
    for (std::int64_t j = 0; j < h; ++j) {
      for (std::int64_t i = 0; i < w; ++i) {
        if (!occupied(i, j)) continue;
        const double inner = p.rect(i - m + 1, i + m - 1, j - m + 1, j + m - 1);
        const double edges = p.rect(i - m, i - m, j - m + 1, j + m - 1) +
                             p.rect(i + m, i + m, j - m + 1, j + m - 1) +
                             p.rect(i - m + 1, i + m - 1, j - m, j - m) +
                             p.rect(i - m + 1, i + m - 1, j + m, j + m);
        const double corners = p.rect(i - m, i - m, j - m, j - m) + p.rect(i + m, i + m, j - m, j - m) +
                               p.rect(i - m, i - m, j + m, j + m) + p.rect(i + m, i + m, j + m, j + m);
        const double value = (inner + 0.5 * edges + 0.25 * corners) * mass_unit;
        const double ratio = value / rk;
        if (ratio > rep.constant) {
          rep.constant = ratio;
          rep.witness_center = {ox + i, oy + j};
          rep.witness_radius = r;
          rep.witness_mass = value;
        }
      }
    }
  }
  return rep;
}

}  // namespace

std::string to_string(MassConvention c) {
  switch (c) {
    case MassConvention::kSetFraction: return "set-fraction";
    case MassConvention::kSetMeasure: return "set-measure";
    case MassConvention::kMeasure: return "measure";
  }
  return "unknown";
}

FrostmanReport nonconcentration_constant(const GridSet1& s, double kappa, MassConvention convention) {
  require(!s.empty(), "nonconcentration_constant: empty set");
  require(convention != MassConvention::kMeasure,
          "nonconcentration_constant: sets use the set-fraction or set-measure convention");
  std::vector<double> mass(static_cast<std::size_t>(s.length()), 0.0);
  s.for_each_index([&](std::int64_t i) { mass[static_cast<std::size_t>(i - s.offset())] = 1.0; });
  const double unit = convention == MassConvention::kSetFraction
                          ? 1.0 / static_cast<double>(s.count())
                          : s.scale().delta();
  return scan_1d(mass, s.offset(), s.scale(), kappa, unit, convention);
}

FrostmanReport nonconcentration_constant(const GridSet2& s, double kappa, MassConvention convention) {
  require(!s.empty(), "nonconcentration_constant: empty set");
  require(convention != MassConvention::kMeasure,
          "nonconcentration_constant: sets use the set-fraction or set-measure convention");
  Prefix2<std::uint32_t> p(s.width(), s.height());
  s.for_each_cell([&](Cell2 c) { p.cell(c.x - s.offset_x(), c.y - s.offset_y()) = 1; });
  p.integrate();
  const double d = s.scale().delta();
  const double unit =
      convention == MassConvention::kSetFraction ? 1.0 / static_cast<double>(s.count()) : d * d;
  auto occupied = [&](std::int64_t i, std::int64_t j) {
    return s.contains(s.offset_x() + i, s.offset_y() + j);
  };
  return scan_2d(p, s.width(), s.height(), s.offset_x(), s.offset_y(), occupied, s.scale(), kappa,
                 unit, convention);
}

FrostmanReport frostman_constant(const DyadicMeasure1& mu, double kappa) {
  require(mu.length() > 0, "frostman_constant: empty measure");
  return scan_1d(mu.weights(), mu.offset(), mu.scale(), kappa, 1.0, MassConvention::kMeasure);
}

FrostmanReport frostman_constant(const DyadicMeasure2& mu, double kappa) {
  require(mu.width() > 0, "frostman_constant: empty measure");
  Prefix2<double> p(mu.width(), mu.height());
  for (std::int64_t j = 0; j < mu.height(); ++j)
    for (std::int64_t i = 0; i < mu.width(); ++i)
      p.cell(i, j) = mu.weights()[static_cast<std::size_t>(j * mu.width() + i)];
  p.integrate();
  auto occupied = [&](std::int64_t i, std::int64_t j) {
    return mu.weights()[static_cast<std::size_t>(j * mu.width() + i)] > 0;
  };
  return scan_2d(p, mu.width(), mu.height(), mu.offset_x(), mu.offset_y(), occupied, mu.scale(),
                 kappa, 1.0, MassConvention::kMeasure);
}

double ball_mass(const DyadicMeasure1& mu, std::int64_t center, std::int64_t radius_cells) {
  double total = 0;
  for (std::int64_t d = -radius_cells; d <= radius_cells; ++d) {
    const double w = mu.weight(center + d);
    total += (d == -radius_cells || d == radius_cells) ? 0.5 * w : w;
  }
  return total;
}

}  // namespace dproj
