#include "dproj/addcomb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dproj/core.hpp"
#include "dproj/parallel.hpp"
#include "dproj/random.hpp"

namespace dproj {
namespace {

constexpr int kSuiteDepth = 16;
constexpr int kPivots = 8;

double cnt(const GridSet1& s) { return static_cast<double>(s.count()); }

void require_nonempty(std::initializer_list<const GridSet1*> sets, const char* op) {
  for (const auto* s : sets) require(!s->empty(), std::string(op) + ": empty input");
}

InequalityRecord make_record(std::string name, double lhs, double rhs, SumSemantics sem) {
  InequalityRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  if (sem == SumSemantics::kCover) {
    r.name += "_cover";
    r.slack = 4;
    r.asserted = false;
  }
  r.ok = r.lhs <= r.slack * r.rhs;
  return r;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

GridSet1 random_set(Rng& rng, std::int64_t max_size, std::int64_t range) {
  const auto size = rng.between(1, std::min(max_size, range));
  std::vector<std::int64_t> pool(static_cast<std::size_t>(range));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::int64_t i = 0; i < size; ++i) {
    const auto j = rng.between(i, range - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return GridSet1::from_indices(Scale(kSuiteDepth), pool);
}

GridSet2 random_graph(Rng& rng, const GridSet1& a, const GridSet1& b, double density) {
  std::vector<Cell2> cells;
  a.for_each_index([&](std::int64_t i) {
    b.for_each_index([&](std::int64_t j) {
      if (rng.uniform() < density) cells.push_back({i, j});
    });
  });
  if (cells.empty()) cells.push_back({a.min_index(), b.min_index()});
  return GridSet2::from_cells(a.scale(), cells);
}

using Bits = std::vector<std::uint64_t>;

std::int64_t popcount_and(const Bits& x, const Bits& y) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < x.size(); ++i) c += std::popcount(x[i] & y[i]);
  return c;
}

}  // namespace

std::uint64_t digest(const GridSet1& s, std::uint64_t seed) {
  std::uint64_t h = mix(seed, static_cast<std::uint64_t>(s.scale().depth()));
  for (const auto& r : s.runs()) {
    h = mix(h, static_cast<std::uint64_t>(r.lo));
    h = mix(h, static_cast<std::uint64_t>(r.hi));
  }
  return h;
}

std::uint64_t digest(const GridSet2& s, std::uint64_t seed) {
  std::uint64_t h = mix(seed, static_cast<std::uint64_t>(s.scale().depth()));
  s.for_each_cell([&](Cell2 c) {
    h = mix(h, static_cast<std::uint64_t>(c.x));
    h = mix(h, static_cast<std::uint64_t>(c.y));
  });
  return h;
}

GridSet1 scale_indices(const GridSet1& a, std::int64_t x) {
  std::vector<std::int64_t> idx;
  idx.reserve(static_cast<std::size_t>(a.count()));
  a.for_each_index([&](std::int64_t i) { idx.push_back(i * x); });
  return GridSet1::from_indices(a.scale(), idx);
}

InequalityRecord check_ruzsa_triangle(const GridSet1& x, const GridSet1& y, const GridSet1& z,
                                      SumSemantics sem) {
  require_nonempty({&x, &y, &z}, "check_ruzsa_triangle");
  auto r = make_record("ruzsa_triangle", cnt(diff(x, z, sem)) * cnt(y),
                       cnt(diff(x, y, sem)) * cnt(diff(y, z, sem)), sem);
  r.digest = digest(z, digest(y, digest(x)));
  return r;
}

InequalityRecord check_plunnecke(const GridSet1& x, const std::vector<GridSet1>& ys, SumSemantics sem) {
  require(!ys.empty() && ys.size() <= 4, "check_plunnecke: need 1 to 4 summands");
  require_nonempty({&x}, "check_plunnecke");
  for (const auto& y : ys) require_nonempty({&y}, "check_plunnecke");
  GridSet1 total = ys.front();
  for (std::size_t i = 1; i < ys.size(); ++i) total = sum(total, ys[i], sem);
  // Compare |Y_1+..+Y_k| |X|^(k-1) with prod |X+Y_i| in exact integers.
  __int128 lhs = total.count();
  __int128 rhs = 1;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    rhs *= sum(x, ys[i], sem).count();
    if (i > 0) lhs *= x.count();
  }
  InequalityRecord r = make_record("plunnecke", cnt(total),
                                   static_cast<double>(rhs) / std::pow(cnt(x), static_cast<double>(ys.size() - 1)),
                                   sem);
  if (sem == SumSemantics::kIndex) r.ok = lhs <= rhs;
  r.digest = digest(x);
  for (const auto& y : ys) r.digest = digest(y, r.digest);
  return r;
}

InequalityRecord check_cor_simple(const GridSet1& x, const GridSet1& y, int sign, SumSemantics sem) {
  require_nonempty({&x, &y}, "check_cor_simple");
  require(sign == 1 || sign == -1, "check_cor_simple: sign must be +1 or -1");
  const double big = std::max(cnt(diff(x, x, sem)), cnt(sum(x, x, sem)));
  const double mixed = sign > 0 ? cnt(sum(x, y, sem)) : cnt(diff(x, y, sem));
  auto r = make_record(sign > 0 ? "cor_simple_plus" : "cor_simple_minus", big * cnt(y), mixed * mixed, sem);
  r.digest = digest(y, digest(x));
  return r;
}

InequalityRecord check_sum_to_difference(const GridSet1& x, const GridSet1& y, SumSemantics sem) {
  require_nonempty({&x, &y}, "check_sum_to_difference");
  const double s = cnt(sum(x, y, sem));
  auto r = make_record("sum_to_difference", cnt(diff(x, y, sem)) * cnt(x) * cnt(y), s * s * s, sem);
  r.digest = digest(y, digest(x));
  return r;
}

InequalityRecord check_sum_to_difference_y2(const GridSet1& x, const GridSet1& y) {
  require_nonempty({&x, &y}, "check_sum_to_difference_y2");
  const double s = cnt(sum(x, y, SumSemantics::kIndex));
  auto r = make_record("sum_to_difference_y2", cnt(diff(x, y, SumSemantics::kIndex)) * cnt(y) * cnt(y),
                       s * s * s, SumSemantics::kIndex);
  r.asserted = false;
  r.digest = digest(y, digest(x));
  return r;
}

InequalityRecord check_graph_projection(const GridSet1& a, const GridSet1& b, const GridSet2& g,
                                        std::int64_t x) {
  require_nonempty({&a, &b}, "check_graph_projection");
  require(!g.empty(), "check_graph_projection: empty graph");
  require(is_subset(g, cartesian_product(a, b)), "check_graph_projection: G is not inside A x B");
  const double proj = cnt(graph_sum(g, Rational(x), SumSemantics::kIndex));
  const double axa = cnt(sum(a, scale_indices(a, x), SumSemantics::kIndex));
  auto r = make_record("graph_projection", static_cast<double>(g.count()) * axa,
                       proj * cnt(diff(a, a, SumSemantics::kIndex)) * cnt(diff(a, b, SumSemantics::kIndex)),
                       SumSemantics::kIndex);
  r.digest = digest(g, digest(b, digest(a)));
  return r;
}

double bsg_k(const GridSet1& a, const GridSet1& b, const GridSet2& g) {
  require(!g.empty(), "bsg_k: empty graph");
  const double ab = cnt(a) * cnt(b);
  const double restricted = cnt(graph_sum(g, Rational(1), SumSemantics::kIndex));
  return std::max(ab / static_cast<double>(g.count()), restricted / std::sqrt(ab));
}

BsgResult bsg_extract(const GridSet1& a, const GridSet1& b, const GridSet2& g, double c_cap) {
  require_nonempty({&a, &b}, "bsg_extract");
  require(!g.empty(), "bsg_extract: empty graph");
  require(is_subset(g, cartesian_product(a, b)), "bsg_extract: G is not inside A x B");
  const auto ai = a.indices();
  const auto bi = b.indices();
  const std::size_t na = ai.size(), nb = bi.size();
  const std::size_t words = (nb + 63) / 64;
  auto pos = [](const std::vector<std::int64_t>& v, std::int64_t x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  std::vector<Bits> adj(na, Bits(words, 0));
  g.for_each_cell([&](Cell2 c) {
    const auto j = pos(bi, c.y);
    adj[pos(ai, c.x)][j / 64] |= std::uint64_t{1} << (j % 64);
  });
  auto has = [&](std::size_t i, std::size_t j) { return (adj[i][j / 64] >> (j % 64)) & 1U; };

  BsgResult out;
  out.k_in = bsg_k(a, b, g);
  const double edges = static_cast<double>(g.count());
  const double density = edges / (static_cast<double>(na) * static_cast<double>(nb));

  std::vector<std::size_t> a1;
  for (std::size_t i = 0; i < na; ++i) {
    const auto deg = popcount_and(adj[i], adj[i]);
    if (static_cast<double>(deg) >= edges / (2.0 * static_cast<double>(na))) a1.push_back(i);
  }
  std::vector<std::pair<std::int64_t, std::size_t>> bdeg;
  for (std::size_t j = 0; j < nb; ++j) {
    std::int64_t d = 0;
    for (auto i : a1) d += static_cast<std::int64_t>(has(i, j));
    bdeg.emplace_back(-d, j);
  }
  std::sort(bdeg.begin(), bdeg.end());

  auto evaluate = [&](const std::vector<std::size_t>& ap, const std::vector<std::size_t>& bp, BsgResult& r) {
    std::vector<std::int64_t> as, bs;
    for (auto i : ap) as.push_back(ai[i]);
    for (auto j : bp) bs.push_back(bi[j]);
    r.a_prime = GridSet1::from_indices(a.scale(), as);
    r.b_prime = GridSet1::from_indices(b.scale(), bs);
    Bits mask(words, 0);
    for (auto j : bp) mask[j / 64] |= std::uint64_t{1} << (j % 64);
    std::int64_t e = 0;
    for (auto i : ap) e += popcount_and(adj[i], mask);
    const double sqrt_ab = std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
    r.ratio_a = static_cast<double>(ap.size()) / static_cast<double>(na);
    r.ratio_b = static_cast<double>(bp.size()) / static_cast<double>(nb);
    r.ratio_sum = cnt(sum(r.a_prime, r.b_prime, SumSemantics::kIndex)) / sqrt_ab;
    r.ratio_edges = static_cast<double>(e) / (static_cast<double>(na) * static_cast<double>(nb));
    r.k_out = r.ratio_edges > 0
                  ? std::max({1 / r.ratio_a, 1 / r.ratio_b, r.ratio_sum, 1 / r.ratio_edges})
                  : INFINITY;
  };

  bool have = false;
  const double codeg_min = density * density * static_cast<double>(nb) / 8;
  for (std::size_t t = 0; t < bdeg.size() && t < static_cast<std::size_t>(kPivots); ++t) {
    const std::size_t pivot = bdeg[t].second;
    std::vector<std::size_t> x;
    for (auto i : a1)
      if (has(i, pivot)) x.push_back(i);
    if (x.empty()) continue;
    ++out.attempts;
    std::vector<std::size_t> ap;
    for (auto i : x) {
      std::size_t bad = 0;
      for (auto k : x) bad += static_cast<double>(popcount_and(adj[i], adj[k])) < codeg_min ? 1 : 0;
      if (2 * bad <= x.size()) ap.push_back(i);
    }
    if (ap.empty()) continue;
    std::vector<std::size_t> bp;
    for (std::size_t j = 0; j < nb; ++j) {
      std::size_t d = 0;
      for (auto i : ap) d += has(i, j);
      if (static_cast<double>(d) >= static_cast<double>(ap.size()) / (2 * out.k_in)) bp.push_back(j);
    }
    if (bp.empty()) continue;
    BsgResult cand = out;
    evaluate(ap, bp, cand);
    cand.pivot = bi[pivot];
    if (!have || cand.k_out < out.k_out) {
      const int attempts = out.attempts;
      out = cand;
      out.attempts = attempts;
      have = true;
    }
  }
  if (!have) {
    std::vector<std::size_t> all_a(na), all_b(nb);
    std::iota(all_a.begin(), all_a.end(), 0);
    std::iota(all_b.begin(), all_b.end(), 0);
    evaluate(all_a, all_b, out);
    out.pivot = -1;
  }
  out.exponent = out.k_in > 1 ? std::log(out.k_out) / std::log(out.k_in) : 0.0;
  out.success = out.k_out <= c_cap;
  return out;
}

Suite parse_suite(const std::string& name) {
  if (name == "ruzsa") return Suite::kRuzsa;
  if (name == "plunnecke") return Suite::kPlunnecke;
  if (name == "cor23" || name == "cor_simple") return Suite::kCorSimple;
  if (name == "cor24" || name == "sum_difference") return Suite::kSumDifference;
  if (name == "graph" || name == "graph_projection") return Suite::kGraphProjection;
  throw PreconditionError("unknown suite '" + name +
                          "' (expected ruzsa, plunnecke, cor23, cor24 or graph)");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::kRuzsa: return "ruzsa";
    case Suite::kPlunnecke: return "plunnecke";
    case Suite::kCorSimple: return "cor23";
    case Suite::kSumDifference: return "cor24";
    case Suite::kGraphProjection: return "graph";
  }
  return "unknown";
}

std::vector<InequalityRecord> run_suite(Suite suite, const SuiteOptions& opt) {
  require(opt.cases >= 1, "run_suite: need at least one case");
  require(opt.max_size >= 1 && opt.range >= 1, "run_suite: sizes must be positive");
  std::vector<std::vector<InequalityRecord>> per_case(static_cast<std::size_t>(opt.cases));
  parallel_for(per_case.size(), opt.threads, [&](std::size_t c) {
    Rng rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));
    auto& out = per_case[c];
    auto both = [&](auto&& check) {
      out.push_back(check(SumSemantics::kIndex));
      if (opt.log_cover) out.push_back(check(SumSemantics::kCover));
    };
    switch (suite) {
      case Suite::kRuzsa: {
        const auto x = random_set(rng, opt.max_size, opt.range);
        const auto y = random_set(rng, opt.max_size, opt.range);
        const auto z = random_set(rng, opt.max_size, opt.range);
        both([&](SumSemantics s) { return check_ruzsa_triangle(x, y, z, s); });
        break;
      }
      case Suite::kPlunnecke: {
        const int k = 2 + static_cast<int>(c % 2);
        const auto x = random_set(rng, opt.max_size, opt.range);
        std::vector<GridSet1> ys;
        for (int i = 0; i < k; ++i) ys.push_back(random_set(rng, opt.max_size, opt.range));
        both([&](SumSemantics s) { return check_plunnecke(x, ys, s); });
        break;
      }
      case Suite::kCorSimple: {
        const auto x = random_set(rng, opt.max_size, opt.range);
        const auto y = random_set(rng, opt.max_size, opt.range);
        const int sign = c % 2 == 0 ? 1 : -1;
        both([&](SumSemantics s) { return check_cor_simple(x, y, sign, s); });
        break;
      }
      case Suite::kSumDifference: {
        const auto x = random_set(rng, opt.max_size, opt.range);
        const auto y = random_set(rng, opt.max_size, opt.range);
        both([&](SumSemantics s) { return check_sum_to_difference(x, y, s); });
        out.push_back(check_sum_to_difference_y2(x, y));
        break;
      }
      case Suite::kGraphProjection: {
        const std::int64_t side = std::min<std::int64_t>(opt.max_size, 128);
        const auto a = random_set(rng, side, opt.range);
        const auto b = random_set(rng, side, opt.range);
        static constexpr double kDensities[] = {0.02, 0.1, 0.5, 1.0};
        const auto g = random_graph(rng, a, b, kDensities[c % 4]);
        out.push_back(check_graph_projection(a, b, g, static_cast<std::int64_t>(1 + c % 3)));
        break;
      }
    }
  });
  std::vector<InequalityRecord> flat;
  for (auto& v : per_case)
    for (auto& r : v) flat.push_back(std::move(r));
  return flat;
}

}  // namespace dproj
