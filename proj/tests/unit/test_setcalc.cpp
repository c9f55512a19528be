#include <doctest.h>

#include "../oracles.hpp"
#include "dproj/core.hpp"
#include "dproj/setcalc.hpp"

using namespace dproj;

namespace {

GridSet1 cells(Scale s, std::vector<std::int64_t> v) { return GridSet1::from_indices(s, v); }

const Scale kS(8);

}  // namespace

TEST_SUITE("setcalc") {

TEST_CASE("sum examples") {
  CHECK(sum(cells(kS, {0, 2}), cells(kS, {0, 1}), SumSemantics::kIndex).indices() ==
        std::vector<std::int64_t>{0, 1, 2, 3});
  const auto ap = make_progression(kS, 0, 1, 8);
  const auto s = sum(ap, ap, SumSemantics::kIndex);
  CHECK(s.count() == 15);
  CHECK(s.min_index() == 0);
  CHECK(s.max_index() == 14);
  const auto k = cells(kS, {0, 3, 12, 15});
  CHECK(sum(k, k, SumSemantics::kIndex).indices() == std::vector<std::int64_t>{0, 3, 6, 12, 15, 18, 24, 27, 30});
}

TEST_CASE("diff examples") {
  const auto ap = make_progression(kS, 0, 1, 8);
  const auto d = diff(ap, ap, SumSemantics::kIndex);
  CHECK(d.count() == 15);
  CHECK(d.min_index() == -7);
  CHECK(diff(cells(kS, {5}), cells(kS, {2}), SumSemantics::kIndex).indices() == std::vector<std::int64_t>{3});
  const auto k = cells(kS, {0, 3, 12, 15});
  const auto kd = diff(k, k, SumSemantics::kIndex);
  CHECK(kd.count() == 9);
  for (auto i : kd.indices()) CHECK(kd.contains(-i));
}

TEST_CASE("cover semantics") {
  const auto a = cells(kS, {0}), b = cells(kS, {4});
  CHECK(sum(a, b, SumSemantics::kCover).indices() == std::vector<std::int64_t>{4, 5});
  CHECK(diff(a, b, SumSemantics::kCover).indices() == std::vector<std::int64_t>{-5, -4});
  CHECK(reflect(cells(kS, {2, 3}), SumSemantics::kCover).indices() == std::vector<std::int64_t>{-4, -3});
  CHECK(reflect(cells(kS, {2, 3}), SumSemantics::kIndex).indices() == std::vector<std::int64_t>{-3, -2});
}

TEST_CASE("dilate") {
  const auto k = cells(kS, {0, 3, 12, 15});
  CHECK(dilate(k, Rational(1)) == k);
  CHECK(dilate(cells(Scale(5), {0, 1}), Rational(2)).indices() == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(dilate(cells(Scale(4), {3}), Rational(1, 3)).indices() == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(dilate(k, Rational(0)), PreconditionError);
  CHECK(dilate(dilate(k, Rational(3)), Rational(1, 3)).count() >= k.count());
  CHECK(is_subset(k, dilate(dilate(k, Rational(3)), Rational(1, 3))));
}

TEST_CASE("dilate matches the rational oracle") {
  Rng rng(11);
  for (int c = 0; c < 200; ++c) {
    const auto a = oracle::random_set(rng, kS, rng.between(1, 12), 300);
    const Rational x(rng.between(-40, 40) | 1, rng.between(1, 17));
    CHECK(dilate(a, x) == oracle::make(kS, oracle::dilate(a, x)));
  }
}

TEST_CASE("nfold_sum") {
  const auto k = cells(kS, {0, 3, 12, 15});
  CHECK(nfold_sum(k, 1, SumSemantics::kIndex) == k);
  CHECK(nfold_sum(cells(kS, {0, 1}), 5, SumSemantics::kIndex).indices() ==
        std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
  // {0,3,12,15} = {0,3} + {0,12}, so the triple sum is {0,3,6,9} + {0,12,24,36}
  CHECK(oracle::nfold_sum(k, 3).size() == 16);
  CHECK(nfold_sum(k, 3, SumSemantics::kIndex) == oracle::make(kS, oracle::nfold_sum(k, 3)));
  CHECK_THROWS_AS(nfold_sum(k, 0, SumSemantics::kIndex), PreconditionError);
}

TEST_CASE("nfold_product") {
  const Scale s(4);
  const auto k = cells(s, {1, 5, 9});
  CHECK(nfold_product(k, 1) == k);
  CHECK(nfold_product(cells(s, {16}), 2).indices() == std::vector<std::int64_t>{16, 17, 18});
  CHECK(nfold_product(cells(s, {0}), 2).indices() == std::vector<std::int64_t>{0});
  // [1,2)^N covers [1, 2^N)
  for (int n = 4; n <= 8; n += 2) {
    const Scale sn(n);
    const auto one_two = make_interval(sn, Rational(1), Rational(2));
    for (int N = 1; N <= 3; ++N) {
      const auto p = nfold_product(one_two, N);
      CHECK(p == make_interval(sn, Rational(1), Rational(std::int64_t{1} << N)));
    }
  }
}

TEST_CASE("graph_sum") {
  const Scale s(4);
  const std::vector<Cell2> one{{0, 0}};
  const auto g = GridSet2::from_cells(s, one);
  CHECK(graph_sum(g, Rational(1), SumSemantics::kCover).indices() == std::vector<std::int64_t>{0, 1});
  CHECK(graph_sum(g, Rational(1), SumSemantics::kIndex).indices() == std::vector<std::int64_t>{0});
  const auto ap = make_progression(s, 0, 1, 4);
  CHECK(graph_sum(cartesian_product(ap, ap), Rational(1), SumSemantics::kIndex).count() == 7);
  std::vector<Cell2> diag;
  for (int i = 0; i < 4; ++i) diag.push_back({i, i});
  CHECK(graph_sum(GridSet2::from_cells(s, diag), Rational(1), SumSemantics::kIndex).indices() ==
        std::vector<std::int64_t>{0, 2, 4, 6});
  CHECK_THROWS_AS(graph_sum(g, Rational(1, 2), SumSemantics::kIndex), PreconditionError);
}

TEST_CASE("sum laws against brute force") {
  Rng rng(5);
  for (int c = 0; c < 300; ++c) {
    const auto a = oracle::random_set(rng, kS, rng.between(1, 20), 200);
    const auto b = oracle::random_set(rng, kS, rng.between(1, 20), 200);
    const auto si = sum(a, b, SumSemantics::kIndex);
    const auto sc = sum(a, b, SumSemantics::kCover);
    CHECK(si == oracle::make(kS, oracle::sum(a, b, false)));
    CHECK(sc == oracle::make(kS, oracle::sum(a, b, true)));
    CHECK(diff(a, b, SumSemantics::kIndex) == oracle::make(kS, oracle::diff(a, b, false)));
    CHECK(diff(a, b, SumSemantics::kCover) == oracle::make(kS, oracle::diff(a, b, true)));
    CHECK(sum(a, b, SumSemantics::kIndex, SumAlgorithm::kNaive) == si);
    CHECK(si.count() >= std::max(a.count(), b.count()));
    CHECK(si.count() <= a.count() * b.count());
    CHECK(sc.count() <= 2 * si.count());
    CHECK(is_subset(si, sc));
    CHECK(sum(b, a, SumSemantics::kIndex) == si);
    const auto c3 = oracle::random_set(rng, kS, rng.between(1, 8), 100);
    CHECK(sum(sum(a, b, SumSemantics::kIndex), c3, SumSemantics::kIndex) ==
          sum(a, sum(b, c3, SumSemantics::kIndex), SumSemantics::kIndex));
  }
}

TEST_CASE("sum multiplicities") {
  const auto ap = make_progression(kS, 0, 1, 4);
  const auto m = sum_multiplicity(ap, ap);
  CHECK(m.offset == 0);
  CHECK(m.counts == std::vector<std::uint64_t>{1, 2, 3, 4, 3, 2, 1});
}

TEST_CASE("scale mismatch is rejected") {
  CHECK_THROWS_AS(sum(cells(Scale(3), {0}), cells(Scale(4), {0}), SumSemantics::kIndex), PreconditionError);
}

}  // TEST_SUITE
