#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "dproj/core.hpp"
#include "dproj/measure.hpp"
#include "dproj/project.hpp"

using namespace dproj;

namespace {

constexpr double kPi = std::numbers::pi;

GridSet2 random_plane_set(Rng& rng, Scale s, std::int64_t size, std::int64_t range) {
  std::vector<Cell2> cells;
  while (static_cast<std::int64_t>(cells.size()) < size) cells.push_back({rng.between(0, range - 1), rng.between(0, range - 1)});
  return GridSet2::from_cells(s, cells);
}

GridSet2 cantor_square(int n, int base, std::vector<int> digits) {
  const auto k = gen_cantor(Scale(n), base, digits, 0);
  return cartesian_product(k, k);
}

}  // namespace

TEST_SUITE("project") {

TEST_CASE("directions") {
  const Direction d(kPi + 0.25);
  CHECK(d.theta() == doctest::Approx(0.25));
  CHECK(Direction(kPi / 2).cos() == 0.0);
  CHECK(Direction(kPi / 2).sin() == 1.0);
  const auto e = equispaced_directions(4);
  CHECK(e.size() == 4);
  CHECK(e[2].theta() == doctest::Approx(kPi / 2));
}

TEST_CASE("axis projections are shadows") {
  Rng rng(2);
  for (int c = 0; c < 20; ++c) {
    const auto e = random_plane_set(rng, Scale(6), 30, 40);
    CHECK(project_set(e, Direction(0)) == coordinate_shadow(e, 0));
    CHECK(project_set(e, Direction(kPi / 2)) == coordinate_shadow(e, 1));
  }
}

TEST_CASE("diagonal projection of the square") {
  const auto full = make_interval(Scale(6), Rational(0), Rational(1));
  const auto sq = cartesian_product(full, full);
  const auto p = project_set(sq, Direction(kPi / 4));
  const auto expected = static_cast<std::int64_t>(std::ceil(std::sqrt(2.0) * 64));
  CHECK(p.count() >= expected - 1);
  CHECK(p.count() <= expected + 1);
}

TEST_CASE("project_measure") {
  const Scale s(5);
  const auto a = gen_cantor(s, 2, std::vector<int>{0, 1}, 0);
  const auto b = make_progression(s, 3, 2, 7);
  const auto mu = uniform_on(cartesian_product(a, b));
  const auto marginal = project_measure(mu, Direction(0));
  const auto ua = uniform_on(a);
  CHECK(marginal.support() == ua.support());
  for (auto i : a.indices()) CHECK(marginal.weight(i) == doctest::Approx(ua.weight(i)).epsilon(1e-12));
  const DyadicMeasure2 point(s, 4, 9, 1, 1, {1.0});
  for (double th : {0.1, 0.7, 1.3, 2.9}) {
    const Direction d(th);
    const auto img = project_measure(point, d);
    CHECK(img.support_size() == 1);
    CHECK(img.offset() == fiber_of({4, 9}, d));
  }
  const auto full = make_interval(s, Rational(0), Rational(1));
  const auto tri = project_measure(uniform_on(cartesian_product(full, full)), Direction(kPi / 4));
  CHECK(std::abs(tri.total() - 1) <= kMassTolerance);
  // triangle profile: heaviest near the middle
  const auto& w = tri.weights();
  const auto peak = std::max_element(w.begin(), w.end()) - w.begin();
  CHECK(std::abs(static_cast<double>(peak) - static_cast<double>(w.size()) / 2) <= 2);
}

TEST_CASE("marstrand_average") {
  const auto full = make_interval(Scale(5), Rational(0), Rational(1));
  const auto sq = marstrand_average(cartesian_product(full, full), 24);
  CHECK(sq.min >= 1.0);
  CHECK(sq.mean >= 1.0);
  const Scale s(8);
  const auto one = GridSet2::from_cells(s, std::vector<Cell2>{{7, 7}});
  const auto st = marstrand_average(one, 36);
  for (double l : st.lengths) {
    CHECK(l >= s.delta());
    CHECK(l <= std::sqrt(2.0) * s.delta() + 2 * s.delta());
  }
  CHECK(st.measured_c == doctest::Approx(st.mean * st.energy));
}

TEST_CASE("marstrand medians of Cantor products") {
  const auto k4 = marstrand_average(cantor_square(12, 4, {0, 3}), 360);
  const auto k3 = marstrand_average(cantor_square(12, 3, {0, 2}), 360);
  MESSAGE("median projection, Cantor(4,{0,3})^2: " << k4.median << ", Cantor(3,{0,2})^2: " << k3.median);
  CHECK(k3.median >= 0.2);
  CHECK(k3.median > k4.median);
}

TEST_CASE("kaufman_average") {
  const Scale s(6);
  const auto a = gen_cantor(s, 4, std::vector<int>{0, 3}, 0);
  const auto b = make_progression(s, 0, 3, 10);
  const auto mu = uniform_on(cartesian_product(a, b));
  const auto at_zero = AngleMeasure::point(0.0, 8);
  CHECK(kaufman_average(mu, at_zero, 0.5) == doctest::Approx(riesz_energy(uniform_on(a), 0.5)));
  const DyadicMeasure2 point(s, 1, 2, 1, 1, {1.0});
  CHECK(kaufman_average(point, AngleMeasure::uniform(6), 0.3) == doctest::Approx(std::pow(s.delta(), -0.3)));
  const auto c3 = uniform_on(cantor_square(10, 3, {0, 2}));
  const double k = kaufman_average(c3, AngleMeasure::uniform(6), 0.4);
  const double i = riesz_energy(c3, 0.4);
  MESSAGE("Kaufman ratio on Cantor(3,{0,2})^2: " << k / i);
  CHECK(std::isfinite(k));
  CHECK(k <= 20 * i);
}

TEST_CASE("angle measures") {
  const auto u = AngleMeasure::uniform(8);
  const auto dirs = u.sample(16);
  CHECK(dirs.size() == 16);
  // t and t + 1/2 name the same direction, so the samples wrap around once
  int wraps = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK(dirs[i].theta() >= 0);
    CHECK(dirs[i].theta() < kPi);
    if (i > 0 && dirs[i].theta() < dirs[i - 1].theta()) ++wraps;
  }
  CHECK(wraps == 1);
  const auto p = AngleMeasure::point(1.0, 10);
  CHECK(p.sample(4)[0].theta() == doctest::Approx(1.0).epsilon(0.01));
  CHECK(u.mass_of_cells({u.cell_of(0.3)}) > 0);
}

TEST_CASE("adversarial projection") {
  const auto full = make_interval(Scale(5), Rational(0), Rational(1));
  const auto sq = cartesian_product(full, full);
  for (double lambda : {0.1, 0.33, 0.5, 1.0}) {
    const auto r = adversarial_projection(sq, Direction(0), lambda);
    CHECK(r.count == static_cast<std::int64_t>(std::ceil(lambda * 32)));
    CHECK(r.covered >= static_cast<std::int64_t>(std::ceil(lambda * sq.count())));
    CHECK(is_subset(r.witness, sq));
  }
  Rng rng(4);
  for (int c = 0; c < 20; ++c) {
    const auto e = random_plane_set(rng, Scale(6), 60, 30);
    const Direction d(rng.uniform() * kPi);
    const auto r = adversarial_projection(e, d, 1.0);
    CHECK(r.count == r.nonempty_fibers);
    CHECK(r.count == static_cast<std::int64_t>(oracle::fibers(e, d).size()));
  }
}

TEST_CASE("greedy fibers match exhaustive search") {
  Rng rng(9);
  for (int c = 0; c < 200; ++c) {
    const auto e = random_plane_set(rng, Scale(6), rng.between(1, 18), rng.between(2, 12));
    const Direction d(rng.uniform() * kPi);
    const double lambda = 0.05 + 0.95 * rng.uniform();
    CHECK(adversarial_projection(e, d, lambda).count == oracle::adversarial_count(e, d, lambda));
  }
}

TEST_CASE("adversarial count on a Cantor product") {
  const auto e = cantor_square(10, 3, {0, 2});
  const auto r = adversarial_projection(e, Direction(kPi / 4), 0.9);
  MESSAGE("count / fibers at pi/4: " << static_cast<double>(r.count) / static_cast<double>(r.nonempty_fibers));
  CHECK(r.count == oracle::adversarial_count(e, Direction(kPi / 4), 0.9));
}

TEST_CASE("projection sweep") {
  const auto e = cantor_square(8, 3, {0, 2});
  const auto rep = projection_sweep(e, equispaced_directions(32), 0.5, 0.5);
  CHECK(rep.records.size() == 32);
  for (const auto& r : rep.records) {
    CHECK(r.adversarial_count <= r.projection_count);
    CHECK(r.energy > 0);
  }
  CHECK(rep.adversarial_quantiles.size() == 5);
  const auto again = projection_sweep(e, equispaced_directions(32), 0.5, 0.5, 4);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(again.records[i].adversarial_count == rep.records[i].adversarial_count);
    CHECK(again.records[i].energy == rep.records[i].energy);
  }
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
}

}  // TEST_SUITE
