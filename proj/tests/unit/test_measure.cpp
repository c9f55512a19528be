#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "dproj/core.hpp"
#include "dproj/frostman.hpp"
#include "dproj/measure.hpp"

using namespace dproj;

namespace {

DyadicMeasure1 point_mass(Scale s, std::int64_t cell) { return DyadicMeasure1(s, cell, {1.0}); }

double direct_energy(const DyadicMeasure1& mu, double s) {
  const double delta = mu.scale().delta();
  double e = 0;
  const auto& w = mu.weights();
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[i] == 0 || w[j] == 0) continue;
      const double d = std::max(1.0, std::abs(static_cast<double>(i) - static_cast<double>(j))) * delta;
      e += w[i] * w[j] * std::pow(d, -s);
    }
  return e;
}

// mu of the dyadic interval [k 2^-j, (k+1) 2^-j)
double dyadic_mass(const DyadicMeasure1& mu, int j, std::int64_t k) {
  const int n = mu.scale().depth();
  const std::int64_t lo = k << (n - j), hi = (k + 1) << (n - j);
  double m = 0;
  for (auto c = lo; c < hi; ++c) m += mu.weight(c);
  return m;
}

DyadicMeasure1 random_measure(Rng& rng, Scale s, std::int64_t atoms) {
  std::vector<double> w(static_cast<std::size_t>(s.cells_per_unit()), 0.0);
  for (std::int64_t a = 0; a < atoms; ++a) w[static_cast<std::size_t>(rng.below(w.size()))] += rng.uniform() + 0.01;
  double t = 0;
  for (double x : w) t += x;
  for (auto& x : w) x /= t;
  return DyadicMeasure1(s, 0, w);
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("uniform_on") {
  const Scale s(3);
  CHECK(uniform_on(GridSet1::from_indices(s, std::vector<std::int64_t>{5})).weights() == std::vector<double>{1.0});
  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  CHECK(u.support_size() == 8);
  for (double w : u.weights()) CHECK(w == 0.125);
  const auto k = uniform_on(GridSet1::from_indices(Scale(4), std::vector<std::int64_t>{0, 3, 12, 15}));
  CHECK(k.weight(3) == 0.25);
  CHECK(k.weight(1) == 0.0);
  CHECK_THROWS_AS(DyadicMeasure1(s, 0, {0.5, 0.4}), PreconditionError);
  CHECK_THROWS_AS(DyadicMeasure1(s, 0, {1.5, -0.5}), PreconditionError);
}

TEST_CASE("frostman_constant") {
  const auto u = uniform_on(make_interval(Scale(10), Rational(0), Rational(1)));
  const auto f = frostman_constant(u, 1.0);
  CHECK(f.constant >= 1.0);
  CHECK(f.constant <= 2.01);
  const Scale s(10);
  const auto p = frostman_constant(point_mass(s, 100), 0.7);
  CHECK(p.constant == doctest::Approx(std::pow(s.delta(), -0.7)));
  CHECK(p.witness_radius == doctest::Approx(s.delta()));
  const std::vector<int> d03{0, 3};
  const auto k = frostman_constant(uniform_on(gen_cantor(Scale(12), 4, d03, 6)), 0.5);
  CHECK(k.constant <= 4.0);
  // self-similarity: a level-j Cantor interval has mass 2^-j = (4^-j)^(1/2)
  const auto mu = uniform_on(gen_cantor(Scale(12), 4, d03, 6));
  for (int j = 0; j <= 6; ++j) CHECK(dyadic_mass(mu, 2 * j, 0) == doctest::Approx(std::ldexp(1.0, -j)));
}

TEST_CASE("riesz_energy") {
  const Scale s(10);
  CHECK(riesz_energy(point_mass(s, 3), 0.5) == doctest::Approx(std::pow(s.delta(), -0.5)));
  for (std::int64_t k : {1, 2, 7, 100}) {
    std::vector<double> w(static_cast<std::size_t>(k + 1), 0.0);
    w.front() = w.back() = 0.5;
    const DyadicMeasure1 mu(s, 0, w);
    const double want = (std::pow(static_cast<double>(k) * s.delta(), -0.5) + std::pow(s.delta(), -0.5)) / 2;
    CHECK(riesz_energy(mu, 0.5, EnergyMethod::kDirect) == doctest::Approx(want).epsilon(1e-12));
  }
  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  const double e = riesz_energy(u, 0.5);
  CHECK(std::abs(e / oracle::continuum_energy(0.5) - 1) <= 0.05);
}

TEST_CASE("energy fast path against the direct sum") {
  Rng rng(17);
  for (int c = 0; c < 20; ++c) {
    const auto mu = random_measure(rng, Scale(9), rng.between(1, 300));
    const double s = 0.2 + 0.6 * rng.uniform();
    const double direct = riesz_energy(mu, s, EnergyMethod::kDirect);
    CHECK(direct == doctest::Approx(direct_energy(mu, s)).epsilon(1e-9));
    const double binned = riesz_energy(mu, s, EnergyMethod::kBinned);
    CHECK(binned >= direct * (1 - 1e-12));
    CHECK(binned <= direct * std::pow(2.0, s) * (1 + 1e-12));
    CHECK(riesz_energy(mu, s, EnergyMethod::kDirect, 4) == direct);
  }
}

TEST_CASE("energy in the plane") {
  const auto full = make_interval(Scale(4), Rational(0), Rational(1));
  const auto mu = uniform_on(cartesian_product(full, full));
  const double direct = riesz_energy(mu, 1.0, EnergyMethod::kDirect);
  const double binned = riesz_energy(mu, 1.0, EnergyMethod::kBinned);
  CHECK(binned >= direct);
  CHECK(binned <= direct * 2 * std::sqrt(2.0));
}

TEST_CASE("prune_heavy_cubes") {
  const Scale s(6);
  const auto p = prune_heavy_cubes(point_mass(s, 9), 1.0, 1.0, 1.0);
  CHECK(p.removed_mass == doctest::Approx(1.0));
  CHECK(p.kept.empty());
  CHECK(p.removed_cubes_per_level[0] == 0);
  CHECK(p.removed_cubes_per_level[1] == 1);
  // the >= form removes it already at level 0
  CHECK(prune_heavy_cubes(point_mass(s, 9), 1.0, 1.0, 1.0, false).removed_cubes_per_level[0] == 1);

  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  const auto q = prune_heavy_cubes(u, 1.0, 4.0, 1.0);
  CHECK(q.removed_mass == 0.0);
  CHECK(q.kept.count() == 64);

  // re-scan: every surviving dyadic cube is below the threshold
  Rng rng(3);
  for (int c = 0; c < 10; ++c) {
    const auto mu = random_measure(rng, s, 40);
    const double sv = 1.5, kk = 1.0, ll = 1.0;
    const auto r = prune_heavy_cubes(mu, sv, kk, ll);
    CHECK(r.removed_mass > 0);
    if (r.kept.empty()) continue;
    for (int j = 0; j < s.depth(); ++j)
      for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
        double m = 0;
        for (auto cell = k << (s.depth() - j); cell < (k + 1) << (s.depth() - j); ++cell)
          if (r.kept.contains(cell)) m += mu.weight(cell);
        CHECK(m <= kk * ll * std::pow(2.0, -j * sv / 2) + 1e-15);
      }
    CHECK(r.removed_mass == doctest::Approx(1.0 - [&] {
            double t = 0;
            r.kept.for_each_index([&](std::int64_t i) { t += mu.weight(i); });
            return t;
          }()));
  }
}

TEST_CASE("condition") {
  const Scale s(3);
  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  CHECK(condition(u, make_interval(s, Rational(0), Rational(1))) == u);
  const auto two = condition(u, GridSet1::from_indices(s, std::vector<std::int64_t>{2, 6}));
  CHECK(two.weight(2) == 0.5);
  CHECK(two.weight(6) == 0.5);
  const auto a = GridSet1::from_indices(s, std::vector<std::int64_t>{1, 2, 3, 6});
  const auto b = GridSet1::from_indices(s, std::vector<std::int64_t>{2, 3, 7});
  CHECK(condition(condition(u, a), b) == condition(u, set_intersection(a, b)));
  CHECK_THROWS_AS(condition(u, GridSet1::from_indices(Scale(3), std::vector<std::int64_t>{9})), PreconditionError);
}

TEST_CASE("pushforward_affine") {
  const Scale s(4);
  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  CHECK(pushforward_affine(u, Rational(1), Rational(0)) == u);
  const auto shifted = pushforward_affine(u, Rational(1), Rational(3, 16));
  CHECK(shifted.offset() == 3);
  CHECK(shifted.support_size() == 16);
  const auto half = uniform_on(make_interval(s, Rational(0), Rational(1, 2)));
  const auto doubled = pushforward_affine(half, Rational(2), Rational(0));
  CHECK(doubled.scale().depth() == 3);
  CHECK(doubled == uniform_on(make_interval(Scale(3), Rational(0), Rational(1))));
  Rng rng(8);
  for (int c = 0; c < 20; ++c) {
    const auto mu = random_measure(rng, Scale(8), 50);
    const auto nu = pushforward_affine(mu, Rational(rng.between(-9, 9) | 1, rng.between(1, 5)),
                                       Rational(rng.between(-7, 7), 8));
    CHECK(std::abs(nu.total() - 1) <= kMassTolerance);
  }
}

TEST_CASE("maximal_interval") {
  const Scale s(8);
  const auto u = uniform_on(make_interval(s, Rational(0), Rational(1)));
  const auto m = maximal_interval(u, 1.0);
  CHECK(m.level == 0);
  CHECK(m.r0 == 1.0);

  const auto p = maximal_interval(point_mass(s, 0), 1.0);
  CHECK(p.level == 8);
  CHECK(p.index == 0);
  CHECK(p.r0 == doctest::Approx(s.delta()));

  std::vector<double> w(256, 0.0);
  for (int i = 0; i < 16; ++i) w[static_cast<std::size_t>(i)] = 0.9 / 16;
  for (int i = 128; i < 256; ++i) w[static_cast<std::size_t>(i)] = 0.1 / 128;
  const DyadicMeasure1 mix(s, 0, w);
  const auto mm = maximal_interval(mix, 1.0);
  CHECK(mm.level == 4);
  CHECK(mm.index == 0);
  CHECK(mm.m_value == doctest::Approx(3.6));
  CHECK_THROWS_AS(maximal_interval(DyadicMeasure1(s, 300, {1.0}), 1.0), PreconditionError);
}

TEST_CASE("maximality consequences") {
  Rng rng(21);
  for (int c = 0; c < 30; ++c) {
    const Scale s(8);
    const auto mu = random_measure(rng, s, rng.between(1, 30));
    const double kappa = 0.2 + 0.8 * rng.uniform();
    const auto m = maximal_interval(mu, kappa);
    CHECK(m.m_value >= 1.0 - 1e-12);
    CHECK(m.mass == doctest::Approx(dyadic_mass(mu, m.level, m.index)));
    for (int j = m.level; j <= s.depth(); ++j) {
      const int d = j - m.level;
      for (std::int64_t k = m.index << d; k < (m.index + 1) << d; ++k) {
        const double ratio = std::ldexp(1.0, -d);
        CHECK(dyadic_mass(mu, j, k) / m.mass <= std::pow(ratio, kappa / 2) * (1 + 1e-12));
      }
    }
    if (m.level < s.depth()) {
      CHECK(dyadic_mass(mu, m.level + 1, 2 * m.index) > 0);
      CHECK(dyadic_mass(mu, m.level + 1, 2 * m.index + 1) > 0);
    }
  }
}

TEST_CASE("renormalization is Frostman at half the exponent") {
  Rng rng(33);
  for (int c = 0; c < 20; ++c) {
    const auto mu = random_measure(rng, Scale(10), rng.between(1, 200));
    const double kappa = 0.3 + 0.6 * rng.uniform();
    const auto r = renormalize(mu, kappa);
    CHECK(std::abs(r.nu.total() - 1) <= kMassTolerance);
    CHECK(r.nu.offset() >= 0);
    CHECK(r.nu.offset() + r.nu.length() <= r.nu.scale().cells_per_unit());
    CHECK(r.nu.scale().depth() == 10 - r.interval.level);
    CHECK(frostman_constant(r.nu, kappa / 2).constant <= 2.0);
  }
  const auto p = renormalize(point_mass(Scale(6), 5), 0.5);
  CHECK(p.degenerate);
  CHECK(p.nu.support_size() == 1);
}

}  // TEST_SUITE
