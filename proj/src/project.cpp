#include "dproj/project.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "dproj/parallel.hpp"
#include "dproj/summation.hpp"

namespace dproj {
namespace {

constexpr double kSnap = 1e-12;

// a*c + b*s, then one ulp towards `dir` unless the result is exact.
double dot_outward(double a, double c, double b, double s, double dir) {
  const double p1 = a * c;
  const double e1 = std::fma(a, c, -p1);
  const double p2 = b * s;
  const double e2 = std::fma(b, s, -p2);
  const double sum = p1 + p2;
  const double bb = sum - p1;
  const double es = (p1 - (sum - bb)) + (p2 - bb);
  const double err = e1 + e2 + es;
  if (err == 0) return sum;
  return std::nextafter(sum + err, dir);
}

}  // namespace

Direction::Direction(double theta) {
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0) theta += std::numbers::pi;
  theta_ = theta;
  c_ = std::cos(theta);
  s_ = std::sin(theta);
  if (std::abs(c_) < kSnap) {
    c_ = 0;
    s_ = 1;
  } else if (std::abs(s_) < kSnap) {
    s_ = 0;
    c_ = c_ > 0 ? 1 : -1;
  }
}

std::vector<Direction> equispaced_directions(int m) {
  require(m >= 1, "equispaced_directions: need at least one angle");
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) out.emplace_back(std::numbers::pi * k / m);
  return out;
}

AngleMeasure::AngleMeasure(DyadicMeasure1 measure) : mu_(std::move(measure)) {
  const auto cells = mu_.scale().cells_per_unit();
  require(mu_.offset() >= 0 && mu_.offset() + mu_.length() <= cells,
          "AngleMeasure: measure must be supported in [0, 1)");
}

AngleMeasure AngleMeasure::uniform(int depth) {
  const Scale scale(depth);
  return AngleMeasure(
      DyadicMeasure1(scale, 0, std::vector<double>(static_cast<std::size_t>(scale.cells_per_unit()),
                                                  1.0 / static_cast<double>(scale.cells_per_unit()))));
}

AngleMeasure AngleMeasure::point(double theta, int depth) {
  const Scale scale(depth);
  AngleMeasure tmp(DyadicMeasure1(scale, 0, {1.0}));
  return AngleMeasure(DyadicMeasure1(scale, tmp.cell_of(theta), {1.0}));
}

std::int64_t AngleMeasure::cell_of(double theta) const {
  const Direction d(theta);
  const auto cells = mu_.scale().cells_per_unit();
  const auto k = static_cast<std::int64_t>(std::floor(d.theta() / (2 * std::numbers::pi) *
                                                      static_cast<double>(cells)));
  return std::clamp<std::int64_t>(k, 0, cells / 2 > 0 ? cells / 2 - 1 : 0);
}

Direction AngleMeasure::direction_of_cell(std::int64_t cell) const {
  const double t = (static_cast<double>(cell) + 0.5) * mu_.scale().delta();
  return Direction(2 * std::numbers::pi * t);
}

std::vector<Direction> AngleMeasure::sample(int m) const {
  require(m >= 1, "AngleMeasure::sample: need at least one angle");
  const auto& w = mu_.weights();
  std::vector<double> cdf(w.size());
  CompensatedSum acc;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc.add(w[k]);
    cdf[k] = acc.value();
  }
  const double total = cdf.back();
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double q = (k + 0.5) / m * total;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
    if (it == cdf.end()) --it;
    out.push_back(direction_of_cell(mu_.offset() + (it - cdf.begin())));
  }
  return out;
}

double AngleMeasure::mass_of_cells(const std::vector<std::int64_t>& cells) const {
  CompensatedSum acc;
  for (auto c : cells) acc.add(mu_.weight(c));
  return acc.value();
}

std::int64_t fiber_of(Cell2 c, const Direction& d) {
  const double t = (static_cast<double>(c.x) + 0.5) * d.cos() + (static_cast<double>(c.y) + 0.5) * d.sin();
  return static_cast<std::int64_t>(std::floor(t));
}

GridSet1 project_set(const GridSet2& e, const Direction& d) {
  require(!e.empty(), "project_set: empty set");
  const double c = d.cos(), s = d.sin();
  std::vector<Run> runs;
  e.for_each_cell([&](Cell2 cell) {
    const auto a = static_cast<double>(cell.x), b = static_cast<double>(cell.y);
    // Corners minimising / maximising x c + y s; s >= 0 always.
    const double ax_lo = c < 0 ? a + 1 : a;
    const double ax_hi = c > 0 ? a + 1 : a;
    const double lo = dot_outward(ax_lo, c, b, s, -INFINITY);
    const double hi = dot_outward(ax_hi, c, b + (s > 0 ? 1 : 0), s, INFINITY);
    // Cells meeting the open interval (lo, hi).
    runs.push_back({static_cast<std::int64_t>(std::floor(lo)), static_cast<std::int64_t>(std::ceil(hi)) - 1});
  });
  return GridSet1::from_runs(e.scale(), runs);
}

DyadicMeasure1 project_measure(const DyadicMeasure2& mu, const Direction& d) {
  std::vector<std::pair<std::int64_t, double>> atoms;
  mu.for_each_atom([&](Cell2 c, double w) { atoms.emplace_back(fiber_of(c, d), w); });
  require(!atoms.empty(), "project_measure: empty measure");
  std::int64_t lo = atoms.front().first, hi = lo;
  for (const auto& [k, _] : atoms) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [k, v] : atoms) w[static_cast<std::size_t>(k - lo)] += v;
  return DyadicMeasure1(mu.scale(), lo, std::move(w));
}

MarstrandStats marstrand_average(const GridSet2& e, int m, int threads) {
  require(m >= 2, "marstrand_average: need at least 2 angles");
  require(!e.empty(), "marstrand_average: empty set");
  const auto dirs = equispaced_directions(m);
  MarstrandStats out;
  out.angles = m;
  out.lengths.assign(static_cast<std::size_t>(m), 0.0);
  parallel_for(dirs.size(), threads,
               [&](std::size_t k) { out.lengths[k] = project_set(e, dirs[k]).measure(); });
  out.mean = compensated_sum(out.lengths) / m;
  out.median = quantile(out.lengths, 0.5);
  out.min = *std::min_element(out.lengths.begin(), out.lengths.end());
  out.max = *std::max_element(out.lengths.begin(), out.lengths.end());
  out.energy = riesz_energy(uniform_on(e), 1.0, EnergyMethod::kAuto, threads);
  out.measured_c = out.mean * out.energy;
  return out;
}

double kaufman_average(const DyadicMeasure2& mu, const AngleMeasure& nu, double kappa, int threads) {
  require(kappa > 0 && kappa < 1, "kaufman_average: kappa must lie in (0, 1)");
  const auto& w = nu.measure().weights();
  std::vector<double> terms(w.size(), 0.0);
  parallel_for(w.size(), threads, [&](std::size_t k) {
    if (w[k] <= 0) return;
    const auto d = nu.direction_of_cell(nu.measure().offset() + static_cast<std::int64_t>(k));
    terms[k] = w[k] * riesz_energy(project_measure(mu, d), kappa);
  });
  return compensated_sum(terms);
}

AdversarialResult adversarial_projection(const GridSet2& e, const Direction& d, double lambda) {
  require(lambda > 0 && lambda <= 1, "adversarial_projection: fraction must lie in (0, 1]");
  require(!e.empty(), "adversarial_projection: empty set");
  std::unordered_map<std::int64_t, std::vector<Cell2>> fibers;
  e.for_each_cell([&](Cell2 c) { fibers[fiber_of(c, d)].push_back(c); });
  std::vector<std::pair<std::int64_t, const std::vector<Cell2>*>> order;
  order.reserve(fibers.size());
  for (const auto& [k, cells] : fibers) order.emplace_back(k, &cells);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.second->size() != y.second->size()) return x.second->size() > y.second->size();
    return x.first < y.first;
  });
  AdversarialResult out;
  out.nonempty_fibers = static_cast<std::int64_t>(order.size());
  const double target = lambda * static_cast<double>(e.count());
  std::vector<Cell2> chosen;
  for (const auto& [k, cells] : order) {
    if (static_cast<double>(out.covered) >= target) break;
    chosen.insert(chosen.end(), cells->begin(), cells->end());
    out.covered += static_cast<std::int64_t>(cells->size());
    ++out.count;
  }
  ensure(static_cast<double>(out.covered) >= target, "adversarial_projection: fibers exhausted");
  out.witness = GridSet2::from_cells(e.scale(), chosen);
  return out;
}

SweepReport projection_sweep(const GridSet2& e, const std::vector<Direction>& angles, double lambda,
                             double kappa, int threads) {
  SweepReport out;
  out.lambda = lambda;
  out.kappa = kappa;
  out.records.resize(angles.size());
  const auto mu = uniform_on(e);
  parallel_for(angles.size(), threads, [&](std::size_t k) {
    auto& r = out.records[k];
    r.theta = angles[k].theta();
    r.projection_count = project_set(e, angles[k]).count();
    r.adversarial_count = adversarial_projection(e, angles[k], lambda).count;
    r.energy = kappa > 0 ? riesz_energy(project_measure(mu, angles[k]), kappa) : 0.0;
    ensure(r.adversarial_count <= r.projection_count,
           "projection_sweep: adversarial count exceeds projection count");
  });
  std::vector<double> counts;
  for (const auto& r : out.records) counts.push_back(static_cast<double>(r.adversarial_count));
  if (!counts.empty())
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) out.adversarial_quantiles.push_back(quantile(counts, q));
  return out;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: no data");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace dproj
