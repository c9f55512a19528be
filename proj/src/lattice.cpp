#include "dproj/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "dproj/rational.hpp"

namespace dproj {
namespace {

struct CellHash {
  std::size_t operator()(const CellIndex& c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t mod_pos(std::int64_t a, std::int64_t k) {
  const std::int64_t r = a % k;
  return r < 0 ? r + k : r;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

CellRegion CellRegion::make(int dim, double cell_size, std::vector<CellIndex> cells) {
  require(dim >= 1 && dim <= 3, "CellRegion: dimension must be 1, 2 or 3");
  require(cell_size > 0, "CellRegion: cell size must be positive");
  for (auto& c : cells)
    for (int i = dim; i < 3; ++i) c[static_cast<std::size_t>(i)] = 0;
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return CellRegion{dim, cell_size, std::move(cells)};
}

CellRegion CellRegion::from(const GridSet1& s) {
  std::vector<CellIndex> cells;
  s.for_each_index([&](std::int64_t i) { cells.push_back({i, 0, 0}); });
  return make(1, s.scale().delta(), std::move(cells));
}

CellRegion CellRegion::from(const GridSet2& s) {
  std::vector<CellIndex> cells;
  s.for_each_cell([&](Cell2 c) { cells.push_back({c.x, c.y, 0}); });
  return make(2, s.scale().delta(), std::move(cells));
}

double CellRegion::volume() const {
  return static_cast<double>(cells.size()) * std::pow(cell_size, dim);
}

LatticeSearchResult blichfeldt_translate(const CellRegion& v, std::int64_t k) {
  require(!v.cells.empty(), "blichfeldt_translate: empty region");
  require(k >= 1, "blichfeldt_translate: spacing must be a positive number of cells");
  const std::int64_t shifts = ipow(k, v.dim);
  require(k <= (std::int64_t{1} << 26) && shifts <= (std::int64_t{1} << 26),
          "blichfeldt_translate: too many shifts to scan");
  // Flat index with coordinate 0 most significant, so increasing index is
  // lexicographic shift order.
  auto flat = [&](const CellIndex& c) {
    std::int64_t f = 0;
    for (int i = 0; i < v.dim; ++i) f = f * k + mod_pos(c[static_cast<std::size_t>(i)], k);
    return f;
  };
  std::vector<std::int64_t> hist(static_cast<std::size_t>(shifts), 0);
  for (const auto& c : v.cells) ++hist[static_cast<std::size_t>(flat(c))];
  const auto best = std::max_element(hist.begin(), hist.end()) - hist.begin();

  LatticeSearchResult out;
  out.examined_shifts = shifts;
  out.count = hist[static_cast<std::size_t>(best)];
  out.bound = static_cast<double>(v.cells.size()) / static_cast<double>(shifts);
  out.shift.assign(static_cast<std::size_t>(v.dim), 0);
  std::int64_t f = best;
  for (int i = v.dim - 1; i >= 0; --i) {
    out.shift[static_cast<std::size_t>(i)] = f % k;
    f /= k;
  }
  for (auto r : out.shift) out.translation.push_back(static_cast<double>(r) * v.cell_size);
  for (const auto& c : v.cells) {
    if (flat(c) != best) continue;
    std::vector<std::int64_t> tau(static_cast<std::size_t>(v.dim));
    for (int i = 0; i < v.dim; ++i) {
      const auto u = static_cast<std::size_t>(i);
      tau[u] = static_cast<std::int64_t>(floor_div(c[u] - out.shift[u], k));
    }
    out.points.push_back(std::move(tau));
  }
  std::sort(out.points.begin(), out.points.end());
  if (static_cast<double>(out.count) < std::ceil(out.bound - 1e-9)) {
    std::ostringstream msg;
    msg << "blichfeldt_translate: best count " << out.count << " below bound " << out.bound
        << " (|V| = " << v.cells.size() << " cells, k = " << k << ")";
    throw InvariantError(msg.str());
  }
  return out;
}

std::int64_t recount_lattice_points(const CellRegion& v, std::int64_t k,
                                    const std::vector<std::int64_t>& shift) {
  require(static_cast<int>(shift.size()) == v.dim, "recount_lattice_points: shift dimension mismatch");
  if (v.cells.empty()) return 0;
  std::unordered_set<CellIndex, CellHash> members(v.cells.begin(), v.cells.end());
  CellIndex lo = v.cells.front(), hi = v.cells.front();
  for (const auto& c : v.cells)
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], c[i]);
      hi[i] = std::max(hi[i], c[i]);
    }
  std::array<std::int64_t, 3> t0{0, 0, 0}, t1{0, 0, 0};
  for (int i = 0; i < v.dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    t0[u] = static_cast<std::int64_t>(ceil_div(lo[u] - shift[u], k));
    t1[u] = static_cast<std::int64_t>(floor_div(hi[u] - shift[u], k));
  }
  std::int64_t count = 0;
  for (auto a = t0[0]; a <= t1[0]; ++a)
    for (auto b = t0[1]; b <= t1[1]; ++b)
      for (auto c = t0[2]; c <= t1[2]; ++c) {
        CellIndex p{a, b, c};
        for (int i = 0; i < v.dim; ++i) {
          const auto u = static_cast<std::size_t>(i);
          p[u] = shift[u] + k * p[u];
        }
        count += members.count(p) ? 1 : 0;
      }
  return count;
}

double projected_product_measure(const GridSet1& a, const std::vector<double>& v) {
  require(!a.empty(), "projected_product_measure: empty set");
  const auto runs = a.runs();
  const int n = static_cast<int>(v.size());
  const double tuples = std::pow(static_cast<double>(runs.size()), n);
  require(tuples <= 4194304.0, "projected_product_measure: too many run tuples");
  const double d = a.scale().delta();
  std::vector<std::pair<double, double>> iv;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    double lo = 0, hi = 0;
    for (int i = 0; i < n; ++i) {
      const auto& r = runs[pick[static_cast<std::size_t>(i)]];
      lo += v[static_cast<std::size_t>(i)] * static_cast<double>(r.lo) * d;
      hi += v[static_cast<std::size_t>(i)] * static_cast<double>(r.hi + 1) * d;
    }
    iv.emplace_back(lo, hi);
    int i = 0;
    while (i < n && ++pick[static_cast<std::size_t>(i)] == runs.size()) pick[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  std::sort(iv.begin(), iv.end());
  double total = 0, cur_lo = iv.front().first, cur_hi = iv.front().second;
  for (const auto& [lo, hi] : iv) {
    if (lo > cur_hi) {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  return total + (cur_hi - cur_lo);
}

SlabCollisionResult slab_collision(const GridSet1& a, const std::vector<double>& v, double radius,
                                   std::int64_t raster_budget) {
  const int n = static_cast<int>(v.size());
  require(n == 2 || n == 3, "slab_collision: dimension must be 2 or 3");
  for (double vi : v) require(vi >= 0.5 && vi <= 1.0, "slab_collision: v must lie in [1/2, 1]^n");
  require(a.count() >= 2, "slab_collision: A needs at least two cells");
  const double cells_per_tuple = std::pow(static_cast<double>(a.count()), n);
  require(cells_per_tuple <= 1048576.0, "slab_collision: A^n has too many cells");

  SlabCollisionResult out;
  const double delta = a.scale().delta();
  const double diam = a.diameter();
  out.diam = diam;
  out.lambda = projected_product_measure(a, v);
  require(out.lambda > 0, "slab_collision: pi(A^n) has zero measure");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  out.m_required = 2 * (n * diam + 2 * sqrt_n) / out.lambda;
  const double omega = n == 2 ? 2.0 : std::numbers::pi;  // volume of the unit (n-1)-ball
  if (radius <= 0) {
    const double need = out.m_required * std::pow(diam, n) / (std::exp2(1 - n) * omega);
    radius = std::max(1.0, std::pow(need, 1.0 / (n - 1)));
  }
  out.radius = radius;
  out.spacing = 2 * diam;

  double vnorm = 0, v1 = 0;
  for (double vi : v) {
    vnorm += vi * vi;
    v1 += vi;
  }
  vnorm = std::sqrt(vnorm);
  out.tolerance = 2 * delta * v1;

  // Raster grid: k cells per lattice spacing, about raster_budget cells overall.
  const double extent = std::sqrt(radius * radius + 1);
  const double g_min = 2 * extent / std::pow(static_cast<double>(raster_budget), 1.0 / n);
  const auto k = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(out.spacing / g_min)));
  const double g = out.spacing / static_cast<double>(k);
  out.raster_cell = g;
  const double h = g * sqrt_n / 2;
  const auto half = static_cast<std::int64_t>(std::ceil(extent / g)) + 1;

  // (Up) . e_n = p . v/|v| since U is a symmetric involution taking e_n to v/|v|.
  std::vector<CellIndex> cells;
  std::array<std::int64_t, 3> idx{0, 0, 0};
  const std::int64_t third = n == 3 ? half : 0;
  for (idx[0] = -half; idx[0] < half; ++idx[0])
    for (idx[1] = -half; idx[1] < half; ++idx[1])
      for (idx[2] = -third; idx[2] < std::max<std::int64_t>(third, 1); ++idx[2]) {
        double t = 0, norm2 = 0;
        for (int i = 0; i < n; ++i) {
          const double c = (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) * g;
          t += c * v[static_cast<std::size_t>(i)] / vnorm;
          norm2 += c * c;
        }
        const double perp = std::sqrt(std::max(0.0, norm2 - t * t));
        if (std::abs(t) <= 1 + h && perp <= radius + h) cells.push_back({idx[0], idx[1], n == 3 ? idx[2] : 0});
      }
  const auto region = CellRegion::make(n, g, std::move(cells));
  out.raster_cells = static_cast<std::int64_t>(region.cells.size());
  out.v_diameter = 2 * std::hypot(radius + 2 * h, 1 + 2 * h);
  const auto lat = blichfeldt_translate(region, k);
  out.lattice_points = lat.count;

  // Centres of the cells of A^n and their projections, sorted by projection.
  const auto ai = a.indices();
  struct Tuple {
    double proj;
    std::vector<double> x;
  };
  std::vector<Tuple> tuples;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    Tuple t{0, {}};
    for (int i = 0; i < n; ++i) {
      const double c = (static_cast<double>(ai[pick[static_cast<std::size_t>(i)]]) + 0.5) * delta;
      t.x.push_back(c);
      t.proj += v[static_cast<std::size_t>(i)] * c;
    }
    tuples.push_back(std::move(t));
    int i = 0;
    while (i < n && ++pick[static_cast<std::size_t>(i)] == ai.size()) pick[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  std::sort(tuples.begin(), tuples.end(), [](const Tuple& p, const Tuple& q) { return p.proj < q.proj; });
  std::vector<double> proj;
  for (const auto& t : tuples) proj.push_back(t.proj);

  // x, y with pi(x) = pi(y) + w within tolerance; returns false if none.
  auto find_pair = [&](double w, std::size_t& xi, std::size_t& yi) {
    double best = INFINITY;
    for (std::size_t y = 0; y < proj.size(); ++y) {
      const double target = proj[y] + w;
      auto it = std::lower_bound(proj.begin(), proj.end(), target);
      for (auto cand : {it, it == proj.begin() ? it : it - 1}) {
        if (cand == proj.end()) continue;
        const double err = std::abs(*cand - target);
        if (err < best) {
          best = err;
          xi = static_cast<std::size_t>(cand - proj.begin());
          yi = y;
        }
      }
    }
    return best <= out.tolerance;
  };

  const auto m_cap = static_cast<std::size_t>(std::ceil(out.m_required - 1e-9));
  const auto& pts = lat.points;
  for (std::size_t j = 1; j < pts.size() && j < std::max<std::size_t>(m_cap, 2); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<std::int64_t> ell(static_cast<std::size_t>(n));
      double w = 0;
      for (std::size_t u = 0; u < ell.size(); ++u) {
        ell[u] = pts[i][u] - pts[j][u];
        w += out.spacing * v[u] * static_cast<double>(ell[u]);
      }
      std::size_t xi = 0, yi = 0;
      if (!find_pair(w, xi, yi)) continue;
      auto& wit = out.witness;
      wit.i = i;
      wit.j = j;
      wit.ell = ell;
      wit.x = tuples[xi].x;
      wit.y = tuples[yi].x;
      wit.z = wit.y;
      for (std::size_t u = 0; u < ell.size(); ++u) wit.z[u] += out.spacing * static_cast<double>(ell[u]);
      double pz = 0, px = 0;
      for (std::size_t u = 0; u < ell.size(); ++u) {
        pz += v[u] * wit.z[u];
        px += v[u] * wit.x[u];
      }
      wit.mismatch = std::abs(pz - px);
      wit.gap = -1;
      for (std::size_t u = 0; u < ell.size(); ++u) {
        if (ell[u] == 0) continue;
        const double gap = std::abs(wit.z[u] - wit.x[u]);
        if (gap > wit.gap) {
          wit.gap = gap;
          wit.eliminated = static_cast<int>(u);
        }
      }
      out.m_used = static_cast<std::int64_t>(j + 1);
      out.nondegenerate = wit.gap >= diam - 2 * delta;
      out.ell_bounded = true;
      for (auto l : ell)
        out.ell_bounded = out.ell_bounded &&
                          static_cast<double>(std::abs(l)) <= out.v_diameter / (2 * diam) + 1e-12;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "slab_collision: no collision among " << std::min(pts.size(), m_cap)
      << " translates (lambda = " << out.lambda << ", required M = " << out.m_required
      << ", lattice points = " << pts.size() << ")";
  throw InvariantError(msg.str());
}

}  // namespace dproj
