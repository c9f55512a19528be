#include "dproj/expand.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dproj/core.hpp"
#include "dproj/parallel.hpp"

namespace dproj {
namespace {

double exponent_of(double ratio, Scale scale) {
  return scale.depth() == 0 ? 0.0 : std::log(ratio) / std::log(1.0 / scale.delta());
}

double cover_ratio(const GridSet1& a, const GridSet1& b) {
  return static_cast<double>(sum(a, b, SumSemantics::kCover).count()) / static_cast<double>(a.count());
}

}  // namespace

ExpansionCurve nfold_expansion_curve(const GridSet1& k, int n_max) {
  require(!k.empty(), "nfold_expansion_curve: empty set");
  require(n_max >= 1 && n_max <= 5, "nfold_expansion_curve: N_max must lie in 1..5");
  ExpansionCurve out;
  for (int n = 1; n <= n_max; ++n) {
    const auto x = nfold_sum(nfold_product(k, n), n, SumSemantics::kCover);
    const auto d = diff(x, x, SumSemantics::kCover);
    out.points.push_back({n, d.count(), d.measure()});
    if (out.first_half_crossing == 0 && d.measure() >= 0.5) out.first_half_crossing = n;
    if (n > 1 && out.points[static_cast<std::size_t>(n - 1)].measure < out.points[static_cast<std::size_t>(n - 2)].measure)
      out.monotone = false;
  }
  return out;
}

Rational cell_center(std::int64_t k, int m) {
  require(m >= 0 && m <= 38, "cell_center: depth out of range");
  return Rational(2 * k + 1, std::int64_t{1} << (m + 1));
}

double expansion_ratio(const GridSet1& a, Rational x) {
  require(!a.empty(), "expansion_ratio: empty set");
  return cover_ratio(a, dilate(a, x));
}

ExpansionReport find_expander(const GridSet1& a, const GridSet1& candidates, int threads) {
  require(!a.empty(), "find_expander: empty set");
  require(!candidates.empty(), "find_expander: no candidates");
  const auto cells = candidates.indices();
  ExpansionReport out;
  out.depth = a.scale().depth();
  out.records.resize(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    auto& r = out.records[i];
    r.x = cell_center(cells[i], candidates.scale().depth());
    r.ratio = expansion_ratio(a, r.x);
    r.exponent = exponent_of(r.ratio, a.scale());
  });
  for (std::size_t i = 1; i < out.records.size(); ++i)
    if (out.records[i].ratio > out.records[out.best].ratio) out.best = i;
  return out;
}

RenormalizedReport renormalized_find_expander(const GridSet1& a, const DyadicMeasure1& mu, double kappa,
                                              int xres, int threads) {
  require(!a.empty(), "renormalized_find_expander: empty set");
  RenormalizedReport out;
  out.renorm = renormalize(mu, kappa);
  out.degenerate = out.renorm.degenerate;
  const auto& nu = out.renorm.nu;
  out.nu_frostman = frostman_constant(nu, kappa / 2);

  // Candidates: support of nu, coarsened to depth xres.
  const int nu_depth = nu.scale().depth();
  const int depth = std::min(nu_depth, std::max(0, xres));
  std::vector<std::int64_t> coarse;
  nu.support().for_each_index([&](std::int64_t i) {
    const auto c = static_cast<std::int64_t>(floor_div(i, static_cast<__int128>(1) << (nu_depth - depth)));
    if (coarse.empty() || coarse.back() != c) coarse.push_back(c);
  });

  const auto& iv = out.renorm.interval;
  const Rational x0(iv.index, std::int64_t{1} << iv.level);
  const Rational r0(1, std::int64_t{1} << iv.level);
  out.records.resize(coarse.size());
  parallel_for(coarse.size(), threads, [&](std::size_t i) {
    auto& r = out.records[i];
    r.x_local = cell_center(coarse[i], depth);
    r.x = x0 + r0 * r.x_local;
    r.ratio_local = expansion_ratio(a, r.x_local);
    r.ratio_shift = expansion_ratio(a, r.x - x0);
    const auto xa = dilate(a, r.x);
    r.ratio = cover_ratio(a, xa);
    if (x0.is_zero()) {
      r.ratio_composite = r.ratio;
    } else {
      const auto composite = sum(sum(a, xa, SumSemantics::kCover), dilate(a, -x0), SumSemantics::kCover);
      r.ratio_composite = static_cast<double>(composite.count()) / static_cast<double>(a.count());
    }
    r.exponent = exponent_of(r.ratio, a.scale());
  });
  for (std::size_t i = 1; i < out.records.size(); ++i)
    if (out.records[i].ratio > out.records[out.best].ratio) out.best = i;
  return out;
}

ProjectionExperiment projection_theorem_experiment(const GridSet2& e, const AngleMeasure& nu, double epsilon,
                                                   double eta, int m, double beta, double energy_kappa,
                                                   int threads) {
  require(!e.empty(), "projection_theorem_experiment: empty set");
  require(m >= 16, "projection_theorem_experiment: need at least 16 angles");
  require(epsilon >= 0 && eta >= 0, "projection_theorem_experiment: epsilon and eta must be >= 0");
  ProjectionExperiment out;
  const double delta = e.scale().delta();
  out.lambda = std::pow(delta, epsilon);
  out.threshold = std::pow(delta, -eta) * std::sqrt(static_cast<double>(e.count()));
  const auto angles = nu.sample(m);
  out.sweep = projection_sweep(e, angles, out.lambda, energy_kappa, threads);
  std::int64_t good = 0;
  for (const auto& r : out.sweep.records) {
    const bool ok = static_cast<double>(r.adversarial_count) > out.threshold;
    out.good.push_back(ok);
    if (ok) {
      ++good;
    } else {
      out.offending.push_back(r.theta);
    }
  }
  // Quantile sampling gives every sample mass 1/m.
  out.good_fraction = static_cast<double>(good) / m;
  out.nonconcentration = nonconcentration_constant(e, beta, MassConvention::kSetFraction);
  return out;
}

ExhaustionDecomposition exhaust_decompose(const GridSet2& e, const Finder& finder, double threshold,
                                          double min_fraction, std::vector<double> angle_grid,
                                          int max_steps) {
  require(!e.empty(), "exhaust_decompose: empty set");
  require(threshold >= 0 && threshold < 1, "exhaust_decompose: threshold must lie in [0, 1)");
  require(min_fraction > 0 && min_fraction <= 1, "exhaust_decompose: min_fraction must lie in (0, 1]");
  ExhaustionDecomposition out;
  out.threshold = threshold;
  GridSet2 residual = e;
  const double stop = threshold * static_cast<double>(e.count());
  while (static_cast<double>(residual.count()) > stop) {
    out.residual_trace.push_back(residual.count());
    auto found = finder(residual);
    const bool inside = !found.piece.empty() && is_subset(found.piece, residual);
    const bool big = static_cast<double>(found.piece.count()) >= min_fraction * static_cast<double>(residual.count());
    if (!inside || !big || static_cast<int>(out.pieces.size()) >= max_steps) {
      std::ostringstream msg;
      msg << "exhaust_decompose: finder stalled at step " << out.pieces.size() + 1 << " (piece "
          << found.piece.count() << " cells, residual " << residual.count() << ", inside=" << inside
          << "); residual trace:";
      for (auto r : out.residual_trace) msg << ' ' << r;
      throw PreconditionError(msg.str());
    }
    residual = set_difference(residual, found.piece);
    out.pieces.push_back(std::move(found.piece));
    out.angle_sets.push_back(std::move(found.thetas));
  }
  out.leftover = residual;
  double total = 0;
  for (const auto& p : out.pieces) total += static_cast<double>(p.count());
  for (const auto& p : out.pieces) out.weights.push_back(static_cast<double>(p.count()) / total);

  out.angle_grid = std::move(angle_grid);
  out.coverage.assign(out.angle_grid.size(), 0.0);
  for (std::size_t j = 0; j < out.pieces.size(); ++j) {
    for (double t : out.angle_sets[j]) {
      for (std::size_t g = 0; g < out.angle_grid.size(); ++g)
        if (std::abs(out.angle_grid[g] - t) <= 1e-12) out.coverage[g] += out.weights[j];
    }
  }
  if (!out.coverage.empty()) {
    double s = 0;
    for (double c : out.coverage) s += c;
    out.mean_coverage = s / static_cast<double>(out.coverage.size());
  }
  return out;
}

Finder projection_finder(std::vector<double> angle_grid, double lambda, double eta) {
  require(!angle_grid.empty(), "projection_finder: empty angle grid");
  require(lambda > 0 && lambda <= 1, "projection_finder: lambda must lie in (0, 1]");
  return [grid = std::move(angle_grid), lambda, eta](const GridSet2& residual) {
    AdversarialResult worst_res;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto r = adversarial_projection(residual, Direction(grid[i]), lambda);
      if (i == 0 || r.count < worst_res.count) worst_res = std::move(r);
    }
    FinderResult out;
    out.piece = std::move(worst_res.witness);
    const double delta = out.piece.scale().delta();
    const double bar = std::pow(delta, -eta) * std::sqrt(static_cast<double>(out.piece.count()));
    for (double t : grid)
      if (static_cast<double>(project_set(out.piece, Direction(t)).count()) > bar) out.thetas.push_back(t);
    return out;
  };
}

}  // namespace dproj
