#pragma once

// Constructors and elementary operations on grid sets: intervals, Cantor-type
// sets, random branching sets, neighbourhoods and Cartesian products.

#include <cstdint>
#include <span>
#include <vector>

#include "dproj/grid_set.hpp"
#include "dproj/rational.hpp"

namespace dproj {

/// Cells covering [lo, hi); both endpoints must be multiples of delta.
GridSet1 make_interval(Scale scale, Rational lo, Rational hi);

/// Arithmetic progression {start, start + step, ..., start + (count-1) step} of cell indices.
GridSet1 make_progression(Scale scale, std::int64_t start, std::int64_t step, std::int64_t count);

/// Level-`levels` Cantor construction on [0,1) keeping base-`base` digits in
/// `digits`. Each kept interval [k b^-L, (k+1) b^-L) contributes the cells that
/// meet its interior; when base is a power of two the cover is exact.
/// levels <= 0 selects the deepest level with base^levels <= 2^n.
GridSet1 gen_cantor(Scale scale, int base, std::span<const int> digits, int levels);

/// Random dyadic branching set: every kept dyadic interval keeps each child
/// independently with probability 2^(kappa-1), so depth j holds about 2^(j kappa)
/// intervals. Reruns until nonempty; deterministic in `seed`.
GridSet1 gen_random_frostman(Scale scale, double kappa, std::uint64_t seed);

/// Number of occupied cells.
inline std::int64_t covering_number(const GridSet1& s) { return s.count(); }
inline std::int64_t covering_number(const GridSet2& s) { return s.count(); }

/// All cells within index distance r/delta of an occupied cell.
GridSet1 neighborhood(const GridSet1& s, Rational r);

/// s ⊕ {lo, ..., hi} as a bit line (doubling shifted-OR).
BitLine spread(const GridSet1& s, std::int64_t lo, std::int64_t hi);

GridSet2 cartesian_product(const GridSet1& a, const GridSet1& b);

/// Shadow of a planar set on the x (axis 0) or y (axis 1) coordinate.
GridSet1 coordinate_shadow(const GridSet2& e, int axis);

}  // namespace dproj
