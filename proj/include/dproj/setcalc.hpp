#pragma once

#include <cstdint>
#include <vector>

#include "dproj/grid_set.hpp"
#include "dproj/rational.hpp"

namespace dproj {

/// How sums of cell sets are discretised.
///   kIndex: cell indices add, i + j. Exact additive combinatorics on Z.
///   kCover: the cells meeting the true Minkowski sum of the cell unions,
///           i.e. indices i + j and i + j + 1.
enum class SumSemantics { kIndex, kCover };

/// kBitParallel is the production path (shifted-OR over 64-bit words, one
/// doubling pass per run of the sparser operand). kNaive is the double loop
/// kept as an oracle for tests.
enum class SumAlgorithm { kBitParallel, kNaive };

/// Largest bit line any set operation may allocate.
inline constexpr std::int64_t kMaxLineLength = std::int64_t{1} << 31;

GridSet1 sum(const GridSet1& a, const GridSet1& b, SumSemantics sem,
             SumAlgorithm algo = SumAlgorithm::kBitParallel);
GridSet1 diff(const GridSet1& a, const GridSet1& b, SumSemantics sem,
              SumAlgorithm algo = SumAlgorithm::kBitParallel);

/// -A: index negation under kIndex, reflected cells (-i-1) under kCover.
GridSet1 reflect(const GridSet1& a, SumSemantics sem);

/// Exact cover of x * (union of cells), computed on runs with rational endpoints.
GridSet1 dilate(const GridSet1& a, Rational x);

GridSet1 nfold_sum(const GridSet1& a, int n_fold, SumSemantics sem);

/// Cover of {a_1 ... a_N}. Products are folded left to right: P_1 = A and
/// P_{k+1} = cover(P_k * A), each step taking exact rational interval products
/// of runs before covering.
GridSet1 nfold_product(const GridSet1& a, int n_fold);

/// {a + x b : (a, b) in G}. kIndex requires integer x and gives i + x j;
/// kCover gives the exact cover of the real sums over the occupied squares.
GridSet1 graph_sum(const GridSet2& g, Rational x, SumSemantics sem = SumSemantics::kCover);

/// Representation counts r(s) = #{(i, j) : i + j = s} for the index sumset.
struct SumCounts {
  std::int64_t offset = 0;
  std::vector<std::uint64_t> counts;
};
SumCounts sum_multiplicity(const GridSet1& a, const GridSet1& b);

}  // namespace dproj
