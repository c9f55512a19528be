// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// `acceptance --calibrate` prints the measured values behind baselines.hpp.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "../oracles.hpp"
#include "baselines.hpp"
#include "dproj/addcomb.hpp"
#include "dproj/cli.hpp"
#include "dproj/core.hpp"
#include "dproj/expand.hpp"
#include "dproj/lattice.hpp"
#include "dproj/measure.hpp"
#include "dproj/project.hpp"
#include "dproj/setcalc.hpp"

using namespace dproj;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

Outcome inequality_suites() {
  const auto t0 = Clock::now();
  std::int64_t violations = 0, checked = 0;
  for (auto suite : {Suite::kRuzsa, Suite::kPlunnecke, Suite::kCorSimple, Suite::kSumDifference,
                     Suite::kGraphProjection}) {
    SuiteOptions opt;
    opt.cases = 500;
    opt.seed = 2024;
    opt.max_size = 512;
    opt.threads = 1;
    for (const auto& r : run_suite(suite, opt)) {
      if (!r.asserted) continue;
      ++checked;
      if (!r.ok) ++violations;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs <= 60.0,
          std::to_string(checked) + " asserted records, " + std::to_string(violations) + " violations, " +
              fmt(secs, 3) + " s"};
}

GridSet2 random_set2(Rng& rng, Scale s, std::int64_t size, std::int64_t range) {
  std::set<std::pair<std::int64_t, std::int64_t>> c;
  while (static_cast<std::int64_t>(c.size()) < size) c.insert({rng.between(0, range - 1), rng.between(0, range - 1)});
  std::vector<Cell2> cells;
  for (auto [x, y] : c) cells.push_back({x, y});
  return GridSet2::from_cells(s, cells);
}

Outcome oracle_equivalence() {
  Rng rng(4242);
  const Scale s(12);
  std::int64_t mismatches = 0;
  const int cases = 1000;
  for (int c = 0; c < cases; ++c) {
    const auto na = rng.between(1, 12);
    const auto a = oracle::random_set(rng, s, na, 256);
    const auto b = oracle::random_set(rng, s, rng.between(1, 18 - na), 256);
    if (oracle::cells(sum(a, b, SumSemantics::kIndex)) != oracle::sum(a, b, false)) ++mismatches;
    if (oracle::cells(diff(a, b, SumSemantics::kIndex)) != oracle::diff(a, b, false)) ++mismatches;
    const int n_fold = static_cast<int>(rng.between(2, 3));
    const auto small = oracle::random_set(rng, s, rng.between(1, 6), 128);
    if (oracle::cells(nfold_sum(small, n_fold, SumSemantics::kIndex)) != oracle::nfold_sum(small, n_fold))
      ++mismatches;
    const auto e = random_set2(rng, Scale(6), rng.between(1, 18), 12);
    const Direction d(rng.uniform() * 3.141592653589793);
    const double lambda = 0.05 + 0.95 * rng.uniform();
    if (adversarial_projection(e, d, lambda).count != oracle::adversarial_count(e, d, lambda)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(cases) + " cases x 4 operations, " + std::to_string(mismatches) +
                               " mismatches"};
}

CellRegion random_region(Rng& rng, int dim) {
  std::vector<CellIndex> cells;
  const auto count = rng.between(1, 80);
  const std::int64_t span = rng.between(2, 20);
  for (std::int64_t i = 0; i < count; ++i) {
    CellIndex c{0, 0, 0};
    for (int a = 0; a < dim; ++a) c[static_cast<std::size_t>(a)] = rng.between(-span, span);
    cells.push_back(c);
  }
  return CellRegion::make(dim, 1.0 / 16, cells);
}

Outcome blichfeldt() {
  Rng rng(31337);
  std::int64_t failures = 0, total = 0;
  for (int dim = 1; dim <= 3; ++dim) {
    for (int c = 0; c < 200; ++c) {
      const auto v = random_region(rng, dim);
      const std::int64_t k = rng.between(1, 6);
      const auto r = blichfeldt_translate(v, k);
      const auto need = static_cast<std::int64_t>(std::ceil(r.bound - 1e-9));
      const auto recount = oracle::lattice_count(dim, v.cells, k, r.shift);
      ++total;
      if (recount < need || recount != r.count) ++failures;
    }
  }
  return {failures == 0, std::to_string(total) + " regions, " + std::to_string(failures) + " failures"};
}

Outcome energy_calibration() {
  const auto unit = uniform_on(make_interval(Scale(10), Rational(0), Rational(1)));
  const double energy = riesz_energy(unit, 0.5, EnergyMethod::kDirect);
  const double target = oracle::continuum_energy(0.5);
  const double rel = std::abs(energy - target) / target;
  Rng rng(77);
  int outside = 0;
  double worst = 1;
  for (int c = 0; c < 50; ++c) {
    const Scale s(10);
    std::vector<double> w(static_cast<std::size_t>(s.cells_per_unit()), 0.0);
    const auto atoms = rng.between(1, 600);
    for (std::int64_t i = 0; i < atoms; ++i) w[static_cast<std::size_t>(rng.below(w.size()))] += rng.uniform() + 0.01;
    double t = 0;
    for (double x : w) t += x;
    for (auto& x : w) x /= t;
    const DyadicMeasure1 mu(s, 0, w);
    const double sexp = 0.05 + 0.9 * rng.uniform();
    const double direct = riesz_energy(mu, sexp, EnergyMethod::kDirect);
    const double binned = riesz_energy(mu, sexp, EnergyMethod::kBinned);
    const double ratio = binned / direct;
    worst = std::max({worst, ratio, 1 / ratio});
    if (ratio > std::exp2(sexp) * (1 + 1e-12) || ratio < std::exp2(-sexp) * (1 - 1e-12)) ++outside;
  }
  return {rel <= 0.05 && outside == 0, "I_1/2 = " + fmt(energy, 6) + " vs " + fmt(target, 6) + " (" +
                                           fmt(100 * rel, 3) + "%), binned/direct worst factor " + fmt(worst) +
                                           ", " + std::to_string(outside) + " outside 2^s"};
}

Outcome energy_from_nonconcentration() {
  Rng rng(26);
  const Scale s(12);
  const std::vector<double> kappas{0.3, 0.5, 0.8};
  int violations = 0, cases = 0;
  double worst = 0;
  for (int c = 0; c < 50; ++c) {
    const double kappa = kappas[static_cast<std::size_t>(c % 3)];
    GridSet1 a(s);
    if (c % 2 == 0) {
      a = gen_random_frostman(s, kappa, 1000 + static_cast<std::uint64_t>(c));
    } else {
      // a Cantor set with about the same dimension: keep d of b digits, d ~ b^kappa
      const int base = static_cast<int>(rng.between(3, 8));
      const int keep = std::clamp(static_cast<int>(std::lround(std::pow(base, kappa))), 1, base - 1);
      std::vector<int> digits;
      for (int i = 0; i < base; ++i) digits.push_back(i);
      for (int i = base - 1; i > 0; --i) std::swap(digits[static_cast<std::size_t>(i)],
                                                   digits[static_cast<std::size_t>(rng.between(0, i))]);
      digits.resize(static_cast<std::size_t>(keep));
      std::sort(digits.begin(), digits.end());
      a = gen_cantor(s, base, digits, 0);
    }
    const double t = kappa - 0.1;
    const double big_c = nonconcentration_constant(a, kappa).constant;
    const double energy = riesz_energy(uniform_on(a), t);
    const double bound = energy_from_nonconcentration_constant(t, kappa) * big_c;
    worst = std::max(worst, energy / bound);
    ++cases;
    if (energy > bound) ++violations;
  }
  return {violations == 0, std::to_string(cases) + " sets, " + std::to_string(violations) +
                               " violations, worst I_t / (c C) = " + fmt(worst)};
}

Outcome renormalization() {
  Rng rng(606);
  int violations = 0;
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const Scale s(static_cast<int>(rng.between(8, 12)));
    const double kappa = 0.2 + 0.7 * rng.uniform();
    DyadicMeasure1 mu = uniform_on(gen_random_frostman(s, kappa, 500 + static_cast<std::uint64_t>(c)));
    if (c % 2 == 1) {
      std::vector<double> w(static_cast<std::size_t>(s.cells_per_unit()), 0.0);
      const auto atoms = rng.between(1, 400);
      for (std::int64_t i = 0; i < atoms; ++i)
        w[static_cast<std::size_t>(rng.below(w.size()))] += std::pow(rng.uniform(), 4) + 1e-3;
      double t = 0;
      for (double x : w) t += x;
      for (auto& x : w) x /= t;
      mu = DyadicMeasure1(s, 0, w);
    }
    const auto r = renormalize(mu, kappa);
    const double f = frostman_constant(r.nu, kappa / 2).constant;
    worst = std::max(worst, f);
    if (f > 2.0) ++violations;
  }
  return {violations == 0, "20 measures, worst constant " + fmt(worst) + ", " + std::to_string(violations) +
                               " above 2"};
}

struct ExpansionMeasurement {
  double ap_exponent = 0;
  double cantor_exponent = 0;
  double seconds = 0;
};

ExpansionMeasurement measure_expansion() {
  const auto t0 = Clock::now();
  const Scale s(16);
  const auto candidates = make_interval(Scale(8), Rational(1), Rational(2));
  ExpansionMeasurement m;
  // contiguous progressions; a sparse one with generic x expands like |A|^2
  for (std::int64_t count : {16, 256, 4096, 32768, 65536}) {
    const auto ap = make_progression(s, 0, 1, count);
    m.ap_exponent = std::max(m.ap_exponent, find_expander(ap, candidates, 8).best_record().exponent);
  }
  const auto k = gen_cantor(s, 4, std::vector<int>{0, 3}, 0);
  m.cantor_exponent = find_expander(k, candidates, 8).best_record().exponent;
  m.seconds = seconds_since(t0);
  return m;
}

Outcome expansion_contrast(const ExpansionMeasurement& m) {
  const bool ap_ok = m.ap_exponent <= 0.05;
  const bool cantor_ok = m.cantor_exponent >= baseline::kCantorExponent - 0.02;
  return {ap_ok && cantor_ok && m.seconds <= 600,
          "AP best exponent " + fmt(m.ap_exponent) + (ap_ok ? " <= 0.05" : " > 0.05") + ", Cantor " +
              fmt(m.cantor_exponent) + " vs baseline " + fmt(baseline::kCantorExponent) + ", " + fmt(m.seconds, 3) +
              " s"};
}

Outcome slab() {
  Rng rng(88);
  int failures = 0;
  std::int64_t worst_m = 0;
  for (int c = 0; c < 20; ++c) {
    const Scale s(static_cast<int>(rng.between(5, 8)));
    const auto top = s.cells_per_unit() - 1;
    std::set<std::int64_t> cells{rng.between(0, 2), top - rng.between(0, 2)};
    const auto noise = rng.between(0, 6);
    for (std::int64_t i = 0; i < noise; ++i) cells.insert(rng.between(0, top));
    const auto a = oracle::make(s, cells);
    const std::vector<double> v{0.5 + 0.5 * rng.uniform(), 0.5 + 0.5 * rng.uniform()};
    const auto r = slab_collision(a, v);
    worst_m = std::max(worst_m, r.m_used);
    const bool ok = static_cast<double>(r.m_used) <= r.m_required && r.witness.mismatch <= r.tolerance &&
                    r.witness.gap >= r.diam - 2 * s.delta();
    if (!ok) ++failures;
  }
  return {failures == 0, "20 sets, " + std::to_string(failures) + " failures, largest M used " +
                             std::to_string(worst_m)};
}

struct ProjectionMeasurement {
  double good_fraction = 0;
  double seconds = 0;
};

ProjectionMeasurement measure_projection() {
  const auto t0 = Clock::now();
  const auto k = gen_cantor(Scale(12), 3, std::vector<int>{0, 2}, 0);
  const auto e = cartesian_product(k, k);
  const auto ex = projection_theorem_experiment(e, AngleMeasure::uniform(12), 0.05, 0.0, 360, 1.0, 0.0, 8);
  return {ex.good_fraction, seconds_since(t0)};
}

Outcome projection_regression(const ProjectionMeasurement& m) {
  return {m.good_fraction >= baseline::kProjectionGoodFraction - 0.05 && m.seconds <= 300,
          "good fraction " + fmt(m.good_fraction) + " vs baseline " + fmt(baseline::kProjectionGoodFraction) + ", " +
              fmt(m.seconds, 3) + " s"};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dproj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "dproj_acceptance";
  fs::create_directories(dir);
  const auto k = (dir / "k.gs1").string(), e = (dir / "e.gs2").string(), csv = (dir / "run.csv").string();
  if (cli({"gen", "cantor", "--n", "10", "--base", "4", "--digits", "0,3", "--out", k}) != 0 ||
      cli({"gen", "product", "--set", k, "--out", e}) != 0)
    return {false, "could not generate inputs"};
  const std::vector<std::vector<std::string>> experiments{
      {"experiment", "expander", "--set", k, "--candidates", "1:2", "--xres", "6"},
      {"experiment", "projection", "--set", e, "--n", "10", "--angles", "64"},
      {"experiment", "renormalized", "--set", k, "--xres", "5"},
      {"experiment", "curve", "--set", k, "--nmax", "3"},
      {"project", "sweep", "--set", e, "--angles", "48", "--fraction", "0.5"},
      {"verify", "addcomb", "--suite", "plunnecke", "--cases", "100", "--seed", "5"},
      {"measure", "energy", "--set", k, "--s", "0.5"},
  };
  int runs = 0, differing = 0;
  for (const auto& base : experiments) {
    for (const std::string threads : {"1", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads, "--out", csv});
      if (cli(args) != 0) return {false, "run failed: " + base[0] + " " + base[1]};
      const auto first = slurp(csv);
      fs::remove(csv);
      if (cli(args) != 0) return {false, "run failed: " + base[0] + " " + base[1]};
      runs += 2;
      if (slurp(csv) != first) ++differing;
    }
  }
  return {differing == 0, std::to_string(runs) + " runs, " + std::to_string(differing) + " differing pairs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::strcmp(argv[1], "--calibrate") == 0) {
    const auto ex = measure_expansion();
    const auto pr = measure_projection();
    std::cout.precision(17);
    std::cout << "kCantorExponent = " << ex.cantor_exponent << "  (AP " << ex.ap_exponent << ")\n"
              << "kProjectionGoodFraction = " << pr.good_fraction << "\n";
    return 0;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"inequality suites", inequality_suites},
      {"oracle equivalence", oracle_equivalence},
      {"Blichfeldt translates", blichfeldt},
      {"energy calibration", energy_calibration},
      {"energy from non-concentration", energy_from_nonconcentration},
      {"renormalisation fidelity", renormalization},
      {"expansion contrast", [] { return expansion_contrast(measure_expansion()); }},
      {"slab collision", slab},
      {"projection sweep regression", [] { return projection_regression(measure_projection()); }},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
