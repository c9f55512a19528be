#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dproj/project.hpp"
#include "dproj/setcalc.hpp"

namespace dproj {

struct ExpansionCurvePoint {
  int n_fold = 0;
  std::int64_t count = 0;  ///< cells of N K^(N) - N K^(N)
  double measure = 0;
};

struct ExpansionCurve {
  std::vector<ExpansionCurvePoint> points;
  int first_half_crossing = 0;  ///< smallest N with measure >= 1/2, 0 if none
  bool monotone = true;
};

/// measure(N K^(N) - N K^(N)) for N = 1 .. n_max, cover semantics throughout.
ExpansionCurve nfold_expansion_curve(const GridSet1& k, int n_max);

struct ExpansionRecord {
  Rational x;
  double ratio = 0;     ///< |A + xA| / |A|
  double exponent = 0;  ///< log(ratio) / log(1/delta)
};

struct ExpansionReport {
  std::vector<ExpansionRecord> records;
  std::size_t best = 0;  ///< largest ratio, first on ties
  int depth = 0;         ///< n of A
  [[nodiscard]] const ExpansionRecord& best_record() const { return records.at(best); }
};

/// Centre of cell k at depth m as an exact rational.
Rational cell_center(std::int64_t k, int m);

/// Cover-semantics ratio |A + xA| / |A|.
double expansion_ratio(const GridSet1& a, Rational x);

/// Sweeps x over the cell centres of `candidates`.
ExpansionReport find_expander(const GridSet1& a, const GridSet1& candidates, int threads = 1);

struct RenormalizedRecord {
  Rational x_local;        ///< candidate in spt nu, (x - x0) / r0
  Rational x;              ///< h^{-1}(x_local) = x0 + r0 x_local
  double ratio_local = 0;  ///< |A + x_local A| / |A|
  double ratio_shift = 0;  ///< |A + (x - x0) A| / |A|
  double ratio_composite = 0;  ///< |A + xA - x0 A| / |A|
  double ratio = 0;        ///< |A + xA| / |A|
  double exponent = 0;     ///< of ratio
};

struct RenormalizedReport {
  Renormalization renorm;
  FrostmanReport nu_frostman;  ///< kappa/2 constant of nu
  std::vector<RenormalizedRecord> records;
  std::size_t best = 0;        ///< largest final ratio
  bool degenerate = false;
};

/// Maximal-interval renormalisation of mu, then a sweep of x over spt(nu),
/// coarsened to depth `xres` when that is coarser than nu's scale.
RenormalizedReport renormalized_find_expander(const GridSet1& a, const DyadicMeasure1& mu, double kappa,
                                              int xres = 8, int threads = 1);

struct ProjectionExperiment {
  SweepReport sweep;
  double lambda = 0;          ///< delta^epsilon
  double threshold = 0;       ///< delta^-eta sqrt(|E|)
  std::vector<bool> good;     ///< adversarial count > threshold
  double good_fraction = 0;   ///< nu-mass of the good sample angles
  std::vector<double> offending;  ///< thetas that failed
  FrostmanReport nonconcentration;  ///< of E at exponent beta
};

/// Samples m angles from nu and records, per angle, the adversarial count at
/// fraction delta^epsilon against delta^-eta sqrt(|E|).
ProjectionExperiment projection_theorem_experiment(const GridSet2& e, const AngleMeasure& nu,
                                                   double epsilon, double eta, int m, double beta = 1.0,
                                                   double energy_kappa = 0, int threads = 1);

struct FinderResult {
  GridSet2 piece;
  std::vector<double> thetas;
};

using Finder = std::function<FinderResult(const GridSet2&)>;

struct ExhaustionDecomposition {
  std::vector<GridSet2> pieces;
  std::vector<std::vector<double>> angle_sets;
  std::vector<double> weights;            ///< rho_j = |F_j| / sum |F|
  GridSet2 leftover;
  double threshold = 0;
  std::vector<std::int64_t> residual_trace;  ///< |residual| before each step
  std::vector<double> angle_grid;
  std::vector<double> coverage;           ///< sum_j rho_j [theta in Theta_j] per grid angle
  double mean_coverage = 0;
};

/// Runs `finder` on the residual until |residual| <= threshold |E|. Every piece
/// must lie in the residual and hold at least min_fraction of it.
ExhaustionDecomposition exhaust_decompose(const GridSet2& e, const Finder& finder, double threshold,
                                          double min_fraction = 1.0 / 64,
                                          std::vector<double> angle_grid = {},
                                          int max_steps = 10000);

/// Finder that removes the heaviest fibers of the worst grid direction (the
/// adversarial witness at fraction lambda) and reports the grid angles where
/// that piece still projects to more than delta^-eta sqrt(|piece|) cells.
Finder projection_finder(std::vector<double> angle_grid, double lambda, double eta);

}  // namespace dproj
