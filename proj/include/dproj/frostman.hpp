#pragma once

#include <string>

#include "dproj/grid_set.hpp"
#include "dproj/measure_types.hpp"

namespace dproj {

/// Which quantity is compared against C r^kappa.
enum class MassConvention {
  kSetFraction,  ///< |S ∩ B(x,r)| / |S|  (the normalised set condition)
  kSetMeasure,   ///< |S ∩ B(x,r)| in ambient Lebesgue units
  kMeasure,      ///< mu(B(x,r)) for a probability measure
};

std::string to_string(MassConvention c);

/// Smallest C with mass(B(x,r)) <= C r^kappa over the tested family, plus the
/// ball attaining it. Balls are centred at occupied cell centres with radii
/// delta * 2^k up to the first power of two covering the whole set; a cell that
/// straddles the ball boundary contributes the fraction of it inside. In 2D the
/// balls are l-infinity balls (squares), which contain the Euclidean ones.
struct FrostmanReport {
  double kappa = 0;
  double constant = 0;
  MassConvention convention = MassConvention::kMeasure;
  int dimension = 1;
  Cell2 witness_center;  // y is 0 in 1D
  double witness_radius = 0;
  double witness_mass = 0;  // mass at the witness, in the report's convention
};

FrostmanReport nonconcentration_constant(const GridSet1& s, double kappa,
                                         MassConvention convention = MassConvention::kSetFraction);
FrostmanReport nonconcentration_constant(const GridSet2& s, double kappa,
                                         MassConvention convention = MassConvention::kSetFraction);

FrostmanReport frostman_constant(const DyadicMeasure1& mu, double kappa);
FrostmanReport frostman_constant(const DyadicMeasure2& mu, double kappa);

/// Mass of the ball of radius `radius_cells` (in cells) around the centre of
/// cell `center`, with fractional boundary cells. Shared with tests.
double ball_mass(const DyadicMeasure1& mu, std::int64_t center, std::int64_t radius_cells);

}  // namespace dproj
