#include "dproj/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dproj/summation.hpp"

namespace dproj {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }
  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw PreconditionError("line " + std::to_string(number_) + ": " + msg);
  }
  std::string value(const std::string& line, const std::string& key) const {
    if (line.rfind(key + "=", 0) != 0) fail("expected '" + key + "=...', got '" + line + "'");
    return line.substr(key.size() + 1);
  }
  std::int64_t integer(std::string_view text) const {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) fail("bad integer '" + std::string(text) + "'");
    return v;
  }
  double real(std::string_view text) const {
    double v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) fail("bad number '" + std::string(text) + "'");
    return v;
  }
  Run run(std::string_view text) const {
    const auto dash = text.find('-', 1);
    if (dash == std::string_view::npos) fail("bad run '" + std::string(text) + "' (expected a-b)");
    Run r{integer(text.substr(0, dash)), integer(text.substr(dash + 1))};
    if (r.hi < r.lo) fail("run '" + std::string(text) + "' has b < a");
    return r;
  }
  Scale scale(const std::string& line) const {
    const auto n = integer(value(line, "n"));
    if (n < 0 || n > kMaxDepth) fail("n out of range");
    return Scale(static_cast<int>(n));
  }

 private:
  std::istream& is_;
  int number_ = 0;
};

GridSet1 parse_gs1(LineReader& in) {
  const Scale scale = in.scale(in.expect("n="));
  const auto offset = in.integer(in.value(in.expect("offset="), "offset"));
  std::vector<Run> runs;
  std::string line;
  while (in.next(line)) {
    auto r = in.run(line);
    runs.push_back({r.lo + offset, r.hi + offset});
  }
  return GridSet1::from_runs(scale, runs);
}

GridSet2 parse_gs2(LineReader& in) {
  const Scale scale = in.scale(in.expect("n="));
  const auto off = in.value(in.expect("offset="), "offset");
  const auto comma = off.find(',');
  if (comma == std::string::npos) in.fail("GS2 offset needs two coordinates");
  const auto ox = in.integer(std::string_view(off).substr(0, comma));
  const auto oy = in.integer(std::string_view(off).substr(comma + 1));
  const auto rows = in.integer(in.value(in.expect("rows="), "rows"));
  if (rows < 0) in.fail("negative row count");
  std::vector<Cell2> cells;
  std::string line;
  while (in.next(line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) in.fail("expected 'row=<j>:a-b', got '" + line + "'");
    const auto j = in.integer(in.value(line.substr(0, colon), "row"));
    if (j < 0 || j >= rows) in.fail("row " + std::to_string(j) + " outside 0.." + std::to_string(rows - 1));
    const auto r = in.run(std::string_view(line).substr(colon + 1));
    for (auto x = r.lo; x <= r.hi; ++x) cells.push_back({x + ox, j + oy});
  }
  return GridSet2::from_cells(scale, cells);
}

template <typename T>
void write_file(const std::string& path, const T& value, void (*fn)(std::ostream&, const T&)) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "cannot open '" + path + "' for writing");
  fn(os, value);
  require(static_cast<bool>(os), "write to '" + path + "' failed");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "cannot open '" + path + "'");
  return is;
}

}  // namespace

void write_gridset(std::ostream& os, const GridSet1& s) {
  os << "GS1 v1\nn=" << s.scale().depth() << "\noffset=" << (s.empty() ? 0 : s.offset()) << '\n';
  for (const auto& r : s.runs()) os << r.lo - s.offset() << '-' << r.hi - s.offset() << '\n';
}

void write_gridset(std::ostream& os, const GridSet2& s) {
  os << "GS2 v1\nn=" << s.scale().depth() << "\noffset=" << s.offset_x() << ',' << s.offset_y()
     << "\nrows=" << s.height() << '\n';
  for (std::int64_t j = 0; j < s.height(); ++j)
    for (const auto& r : s.row_runs(s.offset_y() + j))
      os << "row=" << j << ':' << r.lo - s.offset_x() << '-' << r.hi - s.offset_x() << '\n';
}

GridSet1 read_gridset1(std::istream& is) {
  LineReader in(is);
  if (in.expect("header") != "GS1 v1") in.fail("expected header 'GS1 v1'");
  return parse_gs1(in);
}

GridSet2 read_gridset2(std::istream& is) {
  LineReader in(is);
  if (in.expect("header") != "GS2 v1") in.fail("expected header 'GS2 v1'");
  return parse_gs2(in);
}

std::variant<GridSet1, GridSet2> read_gridset(std::istream& is) {
  LineReader in(is);
  const auto header = in.expect("header");
  if (header == "GS1 v1") return parse_gs1(in);
  if (header == "GS2 v1") return parse_gs2(in);
  in.fail("unknown header '" + header + "' (expected 'GS1 v1' or 'GS2 v1')");
}

void write_gridset_file(const std::string& path, const GridSet1& s) {
  write_file<GridSet1>(path, s, &write_gridset);
}

void write_gridset_file(const std::string& path, const GridSet2& s) {
  write_file<GridSet2>(path, s, &write_gridset);
}

std::variant<GridSet1, GridSet2> read_gridset_file(const std::string& path) {
  auto is = open_in(path);
  try {
    return read_gridset(is);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_measure(std::ostream& os, const DyadicMeasure1& mu) {
  os << "DM1 v1\nn=" << mu.scale().depth() << "\noffset=" << mu.offset() << '\n';
  const auto& w = mu.weights();
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0) os << k << ' ' << format_double(w[k]) << '\n';
}

MeasureLoad read_measure(std::istream& is) {
  LineReader in(is);
  if (in.expect("header") != "DM1 v1") in.fail("expected header 'DM1 v1'");
  const Scale scale = in.scale(in.expect("n="));
  const auto offset = in.integer(in.value(in.expect("offset="), "offset"));
  std::vector<std::pair<std::int64_t, double>> atoms;
  std::string line;
  std::int64_t hi = -1;
  while (in.next(line)) {
    const auto sp = line.find(' ');
    if (sp == std::string::npos) in.fail("expected 'index weight', got '" + line + "'");
    const auto k = in.integer(std::string_view(line).substr(0, sp));
    const auto w = in.real(std::string_view(line).substr(line.find_first_not_of(' ', sp)));
    if (k < 0) in.fail("negative relative index");
    if (w < 0) in.fail("negative weight");
    if (k > (std::int64_t{1} << 31)) in.fail("index too large");
    atoms.emplace_back(k, w);
    hi = std::max(hi, k);
  }
  require(hi >= 0, "DM1: measure has no atoms");
  std::vector<double> weights(static_cast<std::size_t>(hi + 1), 0.0);
  for (const auto& [k, w] : atoms) weights[static_cast<std::size_t>(k)] += w;
  const double total = compensated_sum(weights);
  require(total > 0, "DM1: total weight is zero");
  MeasureLoad out;
  out.drift = std::abs(total - 1);
  if (out.drift > 1e-9) out.warning = "DM1: weights summed to " + format_double(total) + "; renormalised";
  for (auto& w : weights) w /= total;
  out.measure = DyadicMeasure1(scale, offset, std::move(weights));
  return out;
}

MeasureLoad read_measure_file(const std::string& path) {
  auto is = open_in(path);
  try {
    return read_measure(is);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_measure_file(const std::string& path, const DyadicMeasure1& mu) {
  write_file<DyadicMeasure1>(path, mu, &write_measure);
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  ensure(ec == std::errc(), "format_double: conversion failed");
  return std::string(buf, p);
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["n"] = n;
  j["kappa"] = kappa;
  j["sigma"] = sigma;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["epsilon"] = epsilon;
  j["eta"] = eta;
  j["fraction"] = fraction;
  j["threads"] = threads;
  j["out"] = out;
  return j.dump();
}

CsvWriter::CsvWriter(std::ostream& os, const RunConfig& config, std::vector<std::string> header)
    : os_(os), columns_(header.size()) {
  os_ << "# " << config.to_json() << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  ensure(cells.size() == columns_, "CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            os_ << format_double(v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            if (v.find_first_of(",\"\n") == std::string::npos) {
              os_ << v;
            } else {
              os_ << '"';
              for (char c : v) os_ << (c == '"' ? "\"\"" : std::string(1, c));
              os_ << '"';
            }
          } else {
            os_ << v;
          }
        },
        cells[i]);
  }
  os_ << '\n';
}

}  // namespace dproj
