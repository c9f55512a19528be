#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dproj/frostman.hpp"
#include "dproj/measure_types.hpp"
#include "dproj/rational.hpp"

namespace dproj {

DyadicMeasure1 uniform_on(const GridSet1& s);
DyadicMeasure2 uniform_on(const GridSet2& s);

enum class EnergyMethod {
  kAuto,    ///< direct up to kDirectEnergyLimit atoms, binned above
  kDirect,  ///< O(N^2) double sum
  kBinned,  ///< dyadic annuli; overestimates by at most 2^s (1D) or (2 sqrt 2)^s (2D)
};

inline constexpr std::int64_t kDirectEnergyLimit = 4096;

/// s-energy sum_{p,q} w_p w_q d(p,q)^-s with d the distance between cell
/// centres, floored at delta (so d(p,p) = delta).
double riesz_energy(const DyadicMeasure1& mu, double s, EnergyMethod method = EnergyMethod::kAuto,
                    int threads = 1);
double riesz_energy(const DyadicMeasure2& mu, double s, EnergyMethod method = EnergyMethod::kAuto,
                    int threads = 1);

/// Constant in I_t(mu_A) <= c(t, kappa) C for a (delta, kappa, C)-set A in
/// [0,1): 2^(kappa+1) * sum_{j>=0} 2^(j (t - kappa)). Requires t < kappa.
double energy_from_nonconcentration_constant(double t, double kappa);

struct PruneResult {
  GridSet1 kept;
  double removed_mass = 0;
  double energy = 0;          ///< I_s(mu) used for the bound
  double level_sum = 0;       ///< sum_{j<n} 2^(-j s / 2)
  double measured_c = 0;      ///< removed_mass * K L / (energy * level_sum)
  std::vector<std::int64_t> removed_cubes_per_level;
};

/// Removes, for each level 0 <= j < n, the dyadic cubes of side 2^-j whose
/// mu-mass exceeds K L 2^(-j s/2). With strict = true a cube at exactly the
/// threshold survives; strict = false removes it (the >= form).
PruneResult prune_heavy_cubes(const DyadicMeasure1& mu, double s, double k_const, double l_const,
                              bool strict = true);

DyadicMeasure1 condition(const DyadicMeasure1& mu, const GridSet1& s);
DyadicMeasure2 condition(const DyadicMeasure2& mu, const GridSet2& s);

/// Pushes each cell's weight to the cell containing a * centre + b at depth
/// `out_depth`; by default out_depth = n - floor(log2 |a|), so that image
/// cells are no wider than the images of source cells.
DyadicMeasure1 pushforward_affine(const DyadicMeasure1& mu, Rational a, Rational b,
                                  std::optional<int> out_depth = std::nullopt);

struct MaximalIntervalResult {
  int level = 0;              ///< I0 has length 2^-level
  std::int64_t index = 0;     ///< I0 = [index 2^-level, (index+1) 2^-level)
  double r0 = 1;
  double m_value = 0;         ///< mu(I0) / r0^(kappa/2)
  double mass = 0;            ///< mu(I0)
  double x0 = 0;              ///< left endpoint
  std::int64_t first_cell = 0;
  std::int64_t cell_count = 0;
  /// Cells between x0 and the first support cell inside I0.
  std::int64_t support_gap = 0;

  [[nodiscard]] GridSet1 as_set(Scale scale) const;
};

/// Maximises mu(I) / r(I)^(kappa/2) over dyadic I of length 2^-j, 0 <= j <= n.
/// Ties go to the longer interval, then to the smaller left endpoint.
MaximalIntervalResult maximal_interval(const DyadicMeasure1& mu, double kappa);

struct Renormalization {
  MaximalIntervalResult interval;
  DyadicMeasure1 nu;  ///< h#(mu|I0) with h(t) = (t - x0)/r0, at depth n - level
  bool degenerate = false;  ///< I0 is a single cell
};

Renormalization renormalize(const DyadicMeasure1& mu, double kappa);

}  // namespace dproj
