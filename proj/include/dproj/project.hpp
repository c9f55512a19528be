#pragma once

#include <cstdint>
#include <vector>

#include "dproj/measure.hpp"

namespace dproj {

/// Direction (cos theta, sin theta) with theta reduced to [0, pi). Components
/// within 1e-12 of zero are snapped to exact axes so that theta = pi/2 gives
/// the y-shadow exactly.
class Direction {
 public:
  explicit Direction(double theta = 0);

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] double cos() const { return c_; }
  [[nodiscard]] double sin() const { return s_; }

 private:
  double theta_;
  double c_;
  double s_;
};

/// Angles theta_k = k pi / m for k = 0 .. m-1.
std::vector<Direction> equispaced_directions(int m);

/// Probability measure on angles: t in [0,1) stands for theta = 2 pi t (mod pi).
class AngleMeasure {
 public:
  explicit AngleMeasure(DyadicMeasure1 measure);
  static AngleMeasure uniform(int depth);
  static AngleMeasure point(double theta, int depth);

  [[nodiscard]] const DyadicMeasure1& measure() const { return mu_; }
  [[nodiscard]] Direction direction_of_cell(std::int64_t cell) const;
  /// m angles at the quantiles (k + 1/2)/m of the measure, cell centres.
  [[nodiscard]] std::vector<Direction> sample(int m) const;
  /// Total weight of the listed cells.
  [[nodiscard]] double mass_of_cells(const std::vector<std::int64_t>& cells) const;
  /// Cell of [0, 1/2) containing theta / (2 pi).
  [[nodiscard]] std::int64_t cell_of(double theta) const;

 private:
  DyadicMeasure1 mu_;
};

/// 1D cell containing the projection of the cell centre.
std::int64_t fiber_of(Cell2 c, const Direction& d);

/// Cover of pi_theta(E): cells meeting the projection of some occupied square.
GridSet1 project_set(const GridSet2& e, const Direction& d);

/// Each cell's weight goes to the cell containing its centre's projection.
DyadicMeasure1 project_measure(const DyadicMeasure2& mu, const Direction& d);

struct MarstrandStats {
  int angles = 0;
  double mean = 0, median = 0, min = 0, max = 0;
  double energy = 0;       ///< I_1(uniform_on(E))
  double measured_c = 0;   ///< mean * I_1, the constant in mean >= c / I_1
  std::vector<double> lengths;
};

MarstrandStats marstrand_average(const GridSet2& e, int m, int threads = 1);

double kaufman_average(const DyadicMeasure2& mu, const AngleMeasure& nu, double kappa,
                       int threads = 1);

struct AdversarialResult {
  std::int64_t count = 0;            ///< fibers used by the minimising G
  std::int64_t nonempty_fibers = 0;
  std::int64_t covered = 0;          ///< |G|
  GridSet2 witness;
};

/// Minimum number of fibers whose union has at least lambda |E| cells. Greedy
/// on fibers sorted by size (ties by fiber index) is exact.
AdversarialResult adversarial_projection(const GridSet2& e, const Direction& d, double lambda);

struct SweepRecord {
  double theta = 0;
  std::int64_t projection_count = 0;
  std::int64_t adversarial_count = 0;
  double energy = 0;
};

struct SweepReport {
  std::vector<SweepRecord> records;
  double lambda = 0;
  double kappa = 0;
  /// Quantiles 0, .25, .5, .75, 1 of the adversarial counts.
  std::vector<double> adversarial_quantiles;
};

SweepReport projection_sweep(const GridSet2& e, const std::vector<Direction>& angles, double lambda,
                             double kappa, int threads = 1);

/// Linear-interpolated quantile of unsorted data.
double quantile(std::vector<double> values, double q);

}  // namespace dproj
