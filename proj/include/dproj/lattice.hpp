#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dproj/grid_set.hpp"

namespace dproj {

using CellIndex = std::array<std::int64_t, 3>;

/// Union of axis-parallel cells of side `cell_size` in dimension 1..3. Unused
/// trailing coordinates are zero.
struct CellRegion {
  int dim = 1;
  double cell_size = 1;
  std::vector<CellIndex> cells;  ///< sorted, unique

  static CellRegion make(int dim, double cell_size, std::vector<CellIndex> cells);
  static CellRegion from(const GridSet1& s);
  static CellRegion from(const GridSet2& s);
  [[nodiscard]] double volume() const;
};

struct LatticeSearchResult {
  std::vector<std::int64_t> shift;        ///< translation in cell units, each in [0, k)
  std::vector<double> translation;        ///< shift * cell_size
  std::int64_t count = 0;
  double bound = 0;                       ///< |V| / s^dim
  std::int64_t examined_shifts = 0;
  std::vector<std::vector<std::int64_t>> points;  ///< tau with shift + k tau in V, lexicographic
};

/// Translate of the lattice (k cells) Z^dim maximising the number of lattice
/// points in V; ties go to the lexicographically smallest shift. The count
/// only depends on shift residues, so all k^dim shifts are scored in one
/// pass over V.
LatticeSearchResult blichfeldt_translate(const CellRegion& v, std::int64_t k);

/// Independent count of lattice points shift + k Z^dim inside V.
std::int64_t recount_lattice_points(const CellRegion& v, std::int64_t k,
                                    const std::vector<std::int64_t>& shift);

struct CollisionWitness {
  std::size_t i = 0, j = 0;             ///< indices into the lattice point list
  std::vector<std::int64_t> ell;        ///< tau_i - tau_j
  std::vector<double> x, y, z;          ///< z = y + s ell, x and y cell-tuple centres of A^n
  double mismatch = 0;                  ///< |pi(x) - pi(z)|
  int eliminated = 0;                   ///< coordinate with ell != 0 and largest |z - x|
  double gap = 0;                       ///< |z_k - x_k| at that coordinate
};

struct SlabCollisionResult {
  CollisionWitness witness;
  double diam = 0;                ///< diam(A)
  double lambda = 0;              ///< |pi(A^n)|
  double m_required = 0;          ///< 2 [n diam + 2 sqrt n] / lambda
  double radius = 0;              ///< R
  double spacing = 0;             ///< s = 2 diam
  double raster_cell = 0;
  std::int64_t raster_cells = 0;
  std::int64_t lattice_points = 0;
  std::int64_t m_used = 0;        ///< translates examined when the collision appeared
  double tolerance = 0;           ///< 2 delta |v|_1
  double v_diameter = 0;          ///< upper bound for diam of the rasterised slab
  bool nondegenerate = false;     ///< gap >= diam - 2 delta
  bool ell_bounded = false;       ///< |ell_i| <= diam(V) / (2 diam)
};

/// |pi(A^n)| for pi(x) = v . x, as the measure of a union of intervals.
double projected_product_measure(const GridSet1& a, const std::vector<double>& v);

/// Places translates of A^n at the points of a lattice (spacing 2 diam A)
/// inside the slab V = U(B^{n-1}(0,R) x [-1,1]), U the Householder reflection
/// taking e_n to v/|v|, and scans pairs in order until two translates have
/// overlapping projections. radius <= 0 picks the smallest R >= 1 that
/// guarantees enough translates.
SlabCollisionResult slab_collision(const GridSet1& a, const std::vector<double>& v, double radius = 0,
                                   std::int64_t raster_budget = std::int64_t{1} << 22);

}  // namespace dproj
