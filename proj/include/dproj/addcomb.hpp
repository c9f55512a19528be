#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dproj/grid_set.hpp"
#include "dproj/setcalc.hpp"

namespace dproj {

/// One evaluated inequality, normalised to lhs <= slack * rhs.
struct InequalityRecord {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 1;
  bool ok = true;
  bool asserted = true;   ///< false for logged-only variants
  std::uint64_t digest = 0;
};

/// FNV-1a over scale and runs.
std::uint64_t digest(const GridSet1& s, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t digest(const GridSet2& s, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// {x a : a in A} on indices.
GridSet1 scale_indices(const GridSet1& a, std::int64_t x);

/// |X - Z| |Y| <= |X - Y| |Y - Z|.
InequalityRecord check_ruzsa_triangle(const GridSet1& x, const GridSet1& y, const GridSet1& z,
                                      SumSemantics sem = SumSemantics::kIndex);

/// |Y_1 + ... + Y_k| <= alpha_1 ... alpha_k |X| with alpha_i = |X + Y_i| / |X|.
InequalityRecord check_plunnecke(const GridSet1& x, const std::vector<GridSet1>& ys,
                                 SumSemantics sem = SumSemantics::kIndex);

/// max(|X - X|, |X + X|) |Y| <= |X + Y|^2 (sign > 0) or |X - Y|^2 (sign < 0).
InequalityRecord check_cor_simple(const GridSet1& x, const GridSet1& y, int sign,
                                  SumSemantics sem = SumSemantics::kIndex);

/// |X - Y| |X| |Y| <= |X + Y|^3.
InequalityRecord check_sum_to_difference(const GridSet1& x, const GridSet1& y,
                                         SumSemantics sem = SumSemantics::kIndex);

/// |X - Y| |Y|^2 <= |X + Y|^3; logged, never asserted.
InequalityRecord check_sum_to_difference_y2(const GridSet1& x, const GridSet1& y);

/// |G| |A + xA| <= |pi(G)| |A - A| |A - B| with pi(a, b) = a + x b.
InequalityRecord check_graph_projection(const GridSet1& a, const GridSet1& b, const GridSet2& g,
                                        std::int64_t x);

struct BsgResult {
  bool success = false;
  GridSet1 a_prime, b_prime;
  double k_in = 0;
  double ratio_a = 0;       ///< |A'| / |A|
  double ratio_b = 0;       ///< |B'| / |B|
  double ratio_sum = 0;     ///< |A' + B'| / sqrt(|A||B|)
  double ratio_edges = 0;   ///< |G cap A' x B'| / (|A||B|)
  double k_out = 0;         ///< max(1/ratio_a, 1/ratio_b, ratio_sum, 1/ratio_edges)
  double exponent = 0;      ///< log k_out / log k_in (0 when k_in = 1)
  std::int64_t pivot = 0;   ///< b index whose neighbourhood seeded A'
  int attempts = 0;
};

/// K = max(|A||B|/|G|, |A +_G B| / sqrt(|A||B|)), in index semantics.
double bsg_k(const GridSet1& a, const GridSet1& b, const GridSet2& g);

/// Path-of-length-two extraction. Vertices of A with degree below |G|/(2|A|)
/// are dropped; for each of the 8 highest-degree b (ties by index) we take
/// X = N(b), keep the a in X with codegree >= p^2 |B| / 8 to at least half of
/// X, and set B' = {b : |N(b) cap A'| >= |A'| / (2K)}. The attempt with the
/// smallest k_out wins; success means k_out <= c_cap.
BsgResult bsg_extract(const GridSet1& a, const GridSet1& b, const GridSet2& g, double c_cap);

enum class Suite { kRuzsa, kPlunnecke, kCorSimple, kSumDifference, kGraphProjection };

Suite parse_suite(const std::string& name);
std::string to_string(Suite s);

struct SuiteOptions {
  int cases = 500;
  std::uint64_t seed = 1;
  std::int64_t max_size = 256;
  std::int64_t range = 2048;
  int threads = 1;
  bool log_cover = false;  ///< also record the cover-semantics variant (slack 4, not asserted)
};

/// Random instances; records come out in case order whatever the thread count.
std::vector<InequalityRecord> run_suite(Suite suite, const SuiteOptions& opt);

}  // namespace dproj
