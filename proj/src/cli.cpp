#include "dproj/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "dproj/addcomb.hpp"
#include "dproj/core.hpp"
#include "dproj/expand.hpp"
#include "dproj/io.hpp"
#include "dproj/lattice.hpp"
#include "dproj/random.hpp"

namespace dproj {
namespace {

struct Options {
  std::string kind;
  RunConfig cfg;
  // generators
  int base = 4;
  std::string digits = "0,3";
  int levels = 0;
  std::string lo = "0", hi = "1";
  std::int64_t start = 0, step = 1, count = 16;
  // inputs
  std::string set, set_b, measure;
  // operations
  std::string x = "1";
  std::string sem = "cover";
  int nfold = 2;
  std::string radius = "0";
  double theta = 0;
  double s = 0.5;
  std::string method = "auto";
  std::string convention = "fraction";
  double k_const = 1, l_const = 1;
  bool nonstrict = false;
  // sweeps
  int angles = 180;
  std::string candidates = "1:2";
  int xres = -1;
  int nmax = 3;
  double threshold = 0.125;
  // lattice
  std::int64_t spacing = 0;
  std::string v = "0.75,0.75";
  double slab_radius = 0;
  // verify
  std::string suite = "ruzsa";
  int cases = 500;
  std::int64_t max_size = 256;
  std::int64_t range = 2048;
  bool log_cover = false;
  double c_cap = 8;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      require(used == t.size(), "");
    } catch (...) {
      throw PreconditionError("bad number '" + t + "' in '" + text + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double d : parse_reals(text)) {
    require(d == std::floor(d), "expected integers in '" + text + "'");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

SumSemantics parse_sem(const std::string& s) {
  if (s == "index") return SumSemantics::kIndex;
  if (s == "cover") return SumSemantics::kCover;
  throw PreconditionError("--sem must be 'index' or 'cover', got '" + s + "'");
}

GridSet1 load1(const std::string& path) {
  require(!path.empty(), "this command needs --set <file.gs1>");
  auto v = read_gridset_file(path);
  require(std::holds_alternative<GridSet1>(v), path + ": expected a GS1 (1D) set");
  return std::get<GridSet1>(v);
}

GridSet2 load2(const std::string& path) {
  require(!path.empty(), "this command needs --set <file.gs2>");
  auto v = read_gridset_file(path);
  require(std::holds_alternative<GridSet2>(v), path + ": expected a GS2 (2D) set");
  return std::get<GridSet2>(v);
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  // CSV goes to --out when given, else to stdout.
  CsvWriter csv(std::vector<std::string> header) {
    std::ostream* os = &out_;
    if (!o_.cfg.out.empty()) {
      file_ = std::make_unique<std::ofstream>(o_.cfg.out, std::ios::binary);
      require(static_cast<bool>(*file_), "cannot open '" + o_.cfg.out + "' for writing");
      os = file_.get();
    }
    return CsvWriter(*os, o_.cfg, std::move(header));
  }
  const std::string& out_path() const {
    require(!o_.cfg.out.empty(), "this command needs --out <file>");
    return o_.cfg.out;
  }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  DyadicMeasure1 measure1() {
    if (!o_.measure.empty()) {
      auto load = read_measure_file(o_.measure);
      if (!load.warning.empty()) err_ << "warning: " << load.warning << '\n';
      return load.measure;
    }
    return uniform_on(load1(o_.set));
  }
  void done(const std::string& what) { out_ << what << '\n'; }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<std::ofstream> file_;
};

using Handler = std::function<void(const Options&, Runner&)>;

void gen(const Options& o, Runner& r) {
  const Scale scale(o.cfg.n);
  auto write1 = [&](const GridSet1& s) {
    write_gridset_file(r.out_path(), s);
    r.done("wrote " + r.out_path() + ": " + std::to_string(s.count()) + " cells, " +
           std::to_string(s.runs().size()) + " runs");
  };
  if (o.kind == "cantor") {
    const auto digits = parse_ints(o.digits);
    write1(gen_cantor(scale, o.base, digits, o.levels));
  } else if (o.kind == "interval") {
    write1(make_interval(scale, Rational::parse(o.lo), Rational::parse(o.hi)));
  } else if (o.kind == "ap") {
    write1(make_progression(scale, o.start, o.step, o.count));
  } else if (o.kind == "frostman") {
    write1(gen_random_frostman(scale, o.cfg.kappa, o.cfg.seed));
  } else if (o.kind == "product") {
    const auto e = cartesian_product(load1(o.set), load1(o.set_b.empty() ? o.set : o.set_b));
    write_gridset_file(r.out_path(), e);
    r.done("wrote " + r.out_path() + ": " + std::to_string(e.count()) + " cells");
  } else if (o.kind == "uniform") {
    write_measure_file(r.out_path(), uniform_on(load1(o.set)));
    r.done("wrote " + r.out_path());
  } else {
    throw PreconditionError("gen: unknown kind '" + o.kind +
                            "' (cantor, interval, ap, frostman, product, uniform)");
  }
}

void op(const Options& o, Runner& r) {
  const auto sem = parse_sem(o.sem);
  GridSet1 result;
  if (o.kind == "sum") {
    result = sum(load1(o.set), load1(o.set_b), sem);
  } else if (o.kind == "diff") {
    result = diff(load1(o.set), load1(o.set_b), sem);
  } else if (o.kind == "dilate") {
    result = dilate(load1(o.set), Rational::parse(o.x));
  } else if (o.kind == "nfold-sum") {
    result = nfold_sum(load1(o.set), o.nfold, sem);
  } else if (o.kind == "nfold-product") {
    result = nfold_product(load1(o.set), o.nfold);
  } else if (o.kind == "neighborhood") {
    result = neighborhood(load1(o.set), Rational::parse(o.radius));
  } else if (o.kind == "graph-sum") {
    result = graph_sum(load2(o.set), Rational::parse(o.x), sem);
  } else {
    throw PreconditionError("op: unknown kind '" + o.kind +
                            "' (sum, diff, dilate, nfold-sum, nfold-product, neighborhood, graph-sum)");
  }
  write_gridset_file(r.out_path(), result);
  r.done("wrote " + r.out_path() + ": " + std::to_string(result.count()) + " cells");
}

void measure_cmd(const Options& o, Runner& r) {
  if (o.kind == "nonconc") {
    const auto conv = o.convention == "fraction" ? MassConvention::kSetFraction
                      : o.convention == "measure" ? MassConvention::kSetMeasure
                                                  : throw PreconditionError("--convention must be fraction or measure");
    auto v = read_gridset_file(o.set);
    const auto rep = std::visit([&](const auto& s) { return nonconcentration_constant(s, o.cfg.kappa, conv); }, v);
    auto csv = r.csv({"kappa", "constant", "convention", "witness_x", "witness_y", "witness_radius", "witness_mass"});
    csv.row({rep.kappa, rep.constant, to_string(rep.convention), rep.witness_center.x, rep.witness_center.y,
             rep.witness_radius, rep.witness_mass});
  } else if (o.kind == "frostman") {
    const auto rep = frostman_constant(r.measure1(), o.cfg.kappa);
    auto csv = r.csv({"kappa", "constant", "witness_x", "witness_radius", "witness_mass"});
    csv.row({rep.kappa, rep.constant, rep.witness_center.x, rep.witness_radius, rep.witness_mass});
  } else if (o.kind == "energy") {
    const auto method = o.method == "auto"     ? EnergyMethod::kAuto
                        : o.method == "direct" ? EnergyMethod::kDirect
                        : o.method == "binned" ? EnergyMethod::kBinned
                                               : throw PreconditionError("--method must be auto, direct or binned");
    const auto mu = r.measure1();
    auto csv = r.csv({"s", "method", "atoms", "energy"});
    csv.row({o.s, o.method, mu.support_size(), riesz_energy(mu, o.s, method, o.cfg.threads)});
  } else if (o.kind == "maximal") {
    const auto m = maximal_interval(r.measure1(), o.cfg.kappa);
    auto csv = r.csv({"level", "index", "r0", "m_value", "mass", "x0", "support_gap"});
    csv.row({static_cast<std::int64_t>(m.level), m.index, m.r0, m.m_value, m.mass, m.x0, m.support_gap});
  } else if (o.kind == "prune") {
    const auto p = prune_heavy_cubes(r.measure1(), o.s, o.k_const, o.l_const, !o.nonstrict);
    auto csv = r.csv({"level", "removed_cubes", "removed_mass", "energy", "measured_c", "kept_cells"});
    for (std::size_t j = 0; j < p.removed_cubes_per_level.size(); ++j)
      csv.row({static_cast<std::int64_t>(j), p.removed_cubes_per_level[j], p.removed_mass, p.energy,
               p.measured_c, p.kept.count()});
  } else if (o.kind == "renormalize") {
    const auto ren = renormalize(r.measure1(), o.cfg.kappa);
    write_measure_file(r.out_path(), ren.nu);
    const auto f = frostman_constant(ren.nu, o.cfg.kappa / 2);
    r.done("wrote " + r.out_path() + ": I0 level " + std::to_string(ren.interval.level) + " index " +
           std::to_string(ren.interval.index) + ", nu Frostman constant " + format_double(f.constant));
  } else {
    throw PreconditionError("measure: unknown kind '" + o.kind +
                            "' (nonconc, frostman, energy, maximal, prune, renormalize)");
  }
}

void project_cmd(const Options& o, Runner& r) {
  if (o.kind == "set") {
    const auto p = project_set(load2(o.set), Direction(o.theta));
    write_gridset_file(r.out_path(), p);
    r.done("wrote " + r.out_path() + ": " + std::to_string(p.count()) + " cells");
  } else if (o.kind == "adversarial") {
    const auto a = adversarial_projection(load2(o.set), Direction(o.theta), o.cfg.fraction);
    auto csv = r.csv({"theta", "fraction", "count", "nonempty_fibers", "covered"});
    csv.row({o.theta, o.cfg.fraction, a.count, a.nonempty_fibers, a.covered});
  } else if (o.kind == "sweep") {
    const auto e = load2(o.set);
    const auto rep = projection_sweep(e, equispaced_directions(o.angles), o.cfg.fraction, o.cfg.kappa,
                                      o.cfg.threads);
    auto csv = r.csv({"theta", "projection_count", "adversarial_count", "energy"});
    for (const auto& rec : rep.records)
      csv.row({rec.theta, rec.projection_count, rec.adversarial_count, rec.energy});
  } else if (o.kind == "marstrand") {
    const auto st = marstrand_average(load2(o.set), o.angles, o.cfg.threads);
    auto csv = r.csv({"theta", "length", "mean", "median", "energy_1", "measured_c"});
    const auto dirs = equispaced_directions(o.angles);
    for (std::size_t k = 0; k < dirs.size(); ++k)
      csv.row({dirs[k].theta(), st.lengths[k], st.mean, st.median, st.energy, st.measured_c});
  } else {
    throw PreconditionError("project: unknown kind '" + o.kind + "' (set, adversarial, sweep, marstrand)");
  }
}

void lattice_cmd(const Options& o, Runner& r) {
  if (o.kind == "blichfeldt") {
    require(o.spacing >= 1, "lattice blichfeldt needs --spacing <cells> >= 1");
    auto v = read_gridset_file(o.set);
    const auto region = std::visit([](const auto& s) { return CellRegion::from(s); }, v);
    const auto res = blichfeldt_translate(region, o.spacing);
    const auto recount = recount_lattice_points(region, o.spacing, res.shift);
    ensure(recount == res.count, "lattice blichfeldt: recount disagrees with the search");
    std::string shift;
    for (auto s : res.shift) shift += (shift.empty() ? "" : " ") + std::to_string(s);
    auto csv = r.csv({"shift", "count", "bound", "recount", "examined_shifts"});
    csv.row({shift, res.count, res.bound, recount, res.examined_shifts});
  } else if (o.kind == "slab") {
    const auto res = slab_collision(load1(o.set), parse_reals(o.v), o.slab_radius);
    std::string ell;
    for (auto l : res.witness.ell) ell += (ell.empty() ? "" : " ") + std::to_string(l);
    auto csv = r.csv({"diam", "lambda", "m_required", "m_used", "lattice_points", "radius", "ell",
                      "eliminated", "gap", "mismatch", "nondegenerate", "ell_bounded"});
    csv.row({res.diam, res.lambda, res.m_required, res.m_used, res.lattice_points, res.radius, ell,
             static_cast<std::int64_t>(res.witness.eliminated), res.witness.gap, res.witness.mismatch,
             static_cast<std::int64_t>(res.nondegenerate), static_cast<std::int64_t>(res.ell_bounded)});
  } else {
    throw PreconditionError("lattice: unknown kind '" + o.kind + "' (blichfeldt, slab)");
  }
}

void verify_cmd(const Options& o, Runner& r) {
  if (o.kind == "addcomb") {
    SuiteOptions so;
    so.cases = o.cases;
    so.seed = o.cfg.seed;
    so.max_size = o.max_size;
    so.range = o.range;
    so.threads = o.cfg.threads;
    so.log_cover = o.log_cover;
    const auto recs = run_suite(parse_suite(o.suite), so);
    int violations = 0;
    {
      auto csv = r.csv({"index", "name", "lhs", "rhs", "slack", "ok", "asserted", "digest"});
      std::int64_t i = 0;
      for (const auto& rec : recs) {
        csv.row({i++, rec.name, rec.lhs, rec.rhs, rec.slack, static_cast<std::int64_t>(rec.ok),
                 static_cast<std::int64_t>(rec.asserted), std::to_string(rec.digest)});
        if (rec.asserted && !rec.ok) ++violations;
      }
    }
    if (violations > 0)
      throw InvariantError("verify addcomb: " + std::to_string(violations) + " constant-1 violations in suite " +
                           o.suite);
  } else if (o.kind == "bsg") {
    const Scale scale(16);
    const auto ap = make_progression(scale, 0, 1, o.count);
    auto csv = r.csv({"case", "k_in", "k_out", "exponent", "ratio_a", "ratio_b", "ratio_sum", "ratio_edges",
                      "pivot", "success"});
    for (int c = 0; c < o.cases; ++c) {
      Rng rng(o.cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1)));
      std::vector<Cell2> cells;
      for (std::int64_t i = 0; i < o.count; ++i)
        for (std::int64_t j = 0; j < o.count; ++j)
          if (rng.uniform() < o.cfg.fraction) cells.push_back({i, j});
      if (cells.empty()) cells.push_back({0, 0});
      const auto b = bsg_extract(ap, ap, GridSet2::from_cells(scale, cells), o.c_cap);
      csv.row({static_cast<std::int64_t>(c), b.k_in, b.k_out, b.exponent, b.ratio_a, b.ratio_b, b.ratio_sum,
               b.ratio_edges, b.pivot, static_cast<std::int64_t>(b.success)});
    }
  } else {
    throw PreconditionError("verify: unknown kind '" + o.kind + "' (addcomb, bsg)");
  }
}

GridSet1 parse_candidates(const std::string& spec, int depth) {
  const auto parts = split(spec, ':');
  require(parts.size() == 2, "--candidates must look like lo:hi, got '" + spec + "'");
  return make_interval(Scale(depth), Rational::parse(parts[0]), Rational::parse(parts[1]));
}

void experiment_cmd(const Options& o, Runner& r) {
  if (o.kind == "expander") {
    const auto a = load1(o.set);
    const int xres = o.xres >= 0 ? o.xres : a.scale().depth() / 2;
    const auto rep = find_expander(a, parse_candidates(o.candidates, xres), o.cfg.threads);
    auto csv = r.csv({"x", "x_value", "ratio", "exponent", "best"});
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
      const auto& rec = rep.records[i];
      csv.row({rec.x.str(), rec.x.to_double(), rec.ratio, rec.exponent, static_cast<std::int64_t>(i == rep.best)});
    }
  } else if (o.kind == "renormalized") {
    const auto a = load1(o.set);
    const auto mu = o.measure.empty() ? uniform_on(a) : r.measure1();
    const int xres = o.xres >= 0 ? o.xres : a.scale().depth() / 2;
    const auto rep = renormalized_find_expander(a, mu, o.cfg.kappa, xres, o.cfg.threads);
    auto csv = r.csv({"x_local", "x", "ratio_local", "ratio_shift", "ratio_composite", "ratio", "exponent",
                      "level", "index", "nu_frostman", "degenerate", "best"});
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
      const auto& rec = rep.records[i];
      csv.row({rec.x_local.str(), rec.x.str(), rec.ratio_local, rec.ratio_shift, rec.ratio_composite, rec.ratio,
               rec.exponent, static_cast<std::int64_t>(rep.renorm.interval.level), rep.renorm.interval.index,
               rep.nu_frostman.constant, static_cast<std::int64_t>(rep.degenerate),
               static_cast<std::int64_t>(i == rep.best)});
    }
  } else if (o.kind == "curve") {
    const auto curve = nfold_expansion_curve(load1(o.set), o.nmax);
    auto csv = r.csv({"N", "count", "measure"});
    for (const auto& p : curve.points) csv.row({static_cast<std::int64_t>(p.n_fold), p.count, p.measure});
  } else if (o.kind == "projection") {
    const auto e = load2(o.set);
    const auto nu = AngleMeasure::uniform(o.cfg.n);
    const auto ex = projection_theorem_experiment(e, nu, o.cfg.epsilon, o.cfg.eta, o.angles, o.cfg.beta, 0,
                                                  o.cfg.threads);
    auto csv = r.csv({"theta", "projection_count", "adversarial_count", "threshold", "good", "good_fraction",
                      "nonconcentration"});
    for (std::size_t k = 0; k < ex.sweep.records.size(); ++k) {
      const auto& rec = ex.sweep.records[k];
      csv.row({rec.theta, rec.projection_count, rec.adversarial_count, ex.threshold,
               static_cast<std::int64_t>(ex.good[k]), ex.good_fraction, ex.nonconcentration.constant});
    }
  } else if (o.kind == "exhaust") {
    const auto e = load2(o.set);
    std::vector<double> grid;
    for (const auto& d : equispaced_directions(o.angles)) grid.push_back(d.theta());
    const auto dec = exhaust_decompose(e, projection_finder(grid, o.cfg.fraction, o.cfg.eta), o.threshold,
                                       o.cfg.fraction / 2, grid);
    auto csv = r.csv({"step", "residual_before", "piece_cells", "weight", "good_angles", "leftover",
                      "mean_coverage"});
    for (std::size_t j = 0; j < dec.pieces.size(); ++j)
      csv.row({static_cast<std::int64_t>(j + 1), dec.residual_trace[j], dec.pieces[j].count(), dec.weights[j],
               static_cast<std::int64_t>(dec.angle_sets[j].size()), dec.leftover.count(), dec.mean_coverage});
  } else {
    throw PreconditionError("experiment: unknown kind '" + o.kind +
                            "' (expander, renormalized, curve, projection, exhaust)");
  }
}

void report_cmd(const Options& o, Runner& r) {
  auto csv = r.csv({"key", "value"});
  if (!o.measure.empty()) {
    const auto mu = r.measure1();
    csv.row({std::string("type"), std::string("DM1")});
    csv.row({std::string("n"), static_cast<std::int64_t>(mu.scale().depth())});
    csv.row({std::string("atoms"), mu.support_size()});
    csv.row({std::string("total"), mu.total()});
    csv.row({std::string("frostman_constant"), frostman_constant(mu, o.cfg.kappa).constant});
    return;
  }
  require(!o.set.empty(), "report needs --set or --measure");
  auto v = read_gridset_file(o.set);
  if (std::holds_alternative<GridSet1>(v)) {
    const auto& s = std::get<GridSet1>(v);
    csv.row({std::string("type"), std::string("GS1")});
    csv.row({std::string("n"), static_cast<std::int64_t>(s.scale().depth())});
    csv.row({std::string("cells"), s.count()});
    csv.row({std::string("runs"), static_cast<std::int64_t>(s.runs().size())});
    csv.row({std::string("measure"), s.measure()});
    if (!s.empty()) {
      csv.row({std::string("diameter"), s.diameter()});
      csv.row({std::string("nonconcentration"),
               nonconcentration_constant(s, o.cfg.kappa, MassConvention::kSetFraction).constant});
    }
  } else {
    const auto& s = std::get<GridSet2>(v);
    csv.row({std::string("type"), std::string("GS2")});
    csv.row({std::string("n"), static_cast<std::int64_t>(s.scale().depth())});
    csv.row({std::string("cells"), s.count()});
    csv.row({std::string("measure"), s.measure()});
    if (!s.empty())
      csv.row({std::string("nonconcentration"),
               nonconcentration_constant(s, o.cfg.kappa, MassConvention::kSetFraction).constant});
  }
}

void add_common(CLI::App* app, Options& o, bool needs_kind) {
  auto* kind = app->add_option("kind", o.kind, "What to do");
  if (needs_kind) kind->required();
  app->add_option("--n", o.cfg.n, "Grid depth, delta = 2^-n")->check(CLI::Range(0, kMaxDepth));
  app->add_option("--seed", o.cfg.seed, "Random seed");
  app->add_option("--threads", o.cfg.threads, "Worker threads")->check(CLI::Range(1, 256));
  app->add_option("--out", o.cfg.out, "Output file");
  app->add_option("--kappa", o.cfg.kappa, "Exponent kappa");
  app->add_option("--sigma", o.cfg.sigma, "Exponent sigma");
  app->add_option("--alpha", o.cfg.alpha, "Exponent alpha");
  app->add_option("--beta", o.cfg.beta, "Exponent beta");
  app->add_option("--epsilon", o.cfg.epsilon, "Exponent epsilon");
  app->add_option("--eta", o.cfg.eta, "Exponent eta");
  app->add_option("--fraction", o.cfg.fraction, "Fraction lambda");
  app->add_option("--set", o.set, "Input set (GS1/GS2)");
  app->add_option("--set-b", o.set_b, "Second input set");
  app->add_option("--measure", o.measure, "Input measure (DM1)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Discretised sum-product and projection toolkit", "dproj"};
  app.require_subcommand(1);
  std::map<CLI::App*, std::pair<std::string, Handler>> handlers;
  auto sub = [&](const char* name, const char* help, Handler h, bool needs_kind = true) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, o, needs_kind);
    handlers[s] = {name, std::move(h)};
    return s;
  };

  auto* g = sub("gen", "Generate sets: cantor, interval, ap, frostman, product, uniform", gen);
  g->add_option("--base", o.base, "Cantor base");
  g->add_option("--digits", o.digits, "Cantor digits, comma separated");
  g->add_option("--levels", o.levels, "Cantor levels (0: deepest that fits)");
  g->add_option("--lo", o.lo, "Interval start");
  g->add_option("--hi", o.hi, "Interval end");
  g->add_option("--start", o.start, "Progression start cell");
  g->add_option("--step", o.step, "Progression step");
  g->add_option("--count", o.count, "Progression length");

  auto* op_cmd = sub("op", "Set operations: sum, diff, dilate, nfold-sum, nfold-product, neighborhood, graph-sum", op);
  op_cmd->add_option("--x", o.x, "Dilation factor (rational)");
  op_cmd->add_option("--sem", o.sem, "index or cover");
  op_cmd->add_option("--N", o.nfold, "Number of folds");
  op_cmd->add_option("--radius", o.radius, "Neighbourhood radius (rational)");

  auto* m = sub("measure", "Measures: nonconc, frostman, energy, maximal, prune, renormalize", measure_cmd);
  m->add_option("--s", o.s, "Energy exponent");
  m->add_option("--method", o.method, "auto, direct or binned");
  m->add_option("--convention", o.convention, "fraction or measure");
  m->add_option("--K", o.k_const, "Pruning constant K");
  m->add_option("--L", o.l_const, "Pruning constant L");
  m->add_flag("--nonstrict", o.nonstrict, "Remove cubes at exactly the threshold");

  auto* p = sub("project", "Projections: set, adversarial, sweep, marstrand", project_cmd);
  p->add_option("--theta", o.theta, "Angle in radians");
  p->add_option("--angles", o.angles, "Number of angles");

  auto* l = sub("lattice", "Lattice constructions: blichfeldt, slab", lattice_cmd);
  l->add_option("--spacing", o.spacing, "Lattice spacing in cells");
  l->add_option("--v", o.v, "Projection vector, comma separated");
  l->add_option("--radius", o.slab_radius, "Slab radius (0: automatic)");

  auto* v = sub("verify", "Verification suites: addcomb, bsg", verify_cmd);
  v->add_option("--suite", o.suite, "ruzsa, plunnecke, cor23, cor24, graph");
  v->add_option("--cases", o.cases, "Number of random cases");
  v->add_option("--max-size", o.max_size, "Largest random set");
  v->add_option("--range", o.range, "Index range of random sets");
  v->add_flag("--log-cover", o.log_cover, "Also record cover-semantics variants");
  v->add_option("--count", o.count, "Progression length for bsg");
  v->add_option("--cap", o.c_cap, "Largest acceptable BSG constant");

  auto* e = sub("experiment", "Experiments: expander, renormalized, curve, projection, exhaust", experiment_cmd);
  e->add_option("--candidates", o.candidates, "Candidate x range lo:hi");
  e->add_option("--xres", o.xres, "Depth of the x grid (default n/2)");
  e->add_option("--nmax", o.nmax, "Largest N for the expansion curve");
  e->add_option("--angles", o.angles, "Number of angles");
  e->add_option("--threshold", o.threshold, "Exhaustion stopping fraction");

  sub("report", "Summarise a set or measure file", report_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n" << app.help();
    return 1;
  }
  try {
    for (auto& [cmd, entry] : handlers) {
      if (!cmd->parsed()) continue;
      o.cfg.command = o.kind.empty() ? entry.first : entry.first + " " + o.kind;
      Runner runner(o, out, err);
      entry.second(o, runner);
      return 0;
    }
    ensure(false, "no subcommand dispatched");
  } catch (const PreconditionError& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const InvariantError& ex) {
    err << "internal error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace dproj
