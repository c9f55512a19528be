#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dproj/measure_types.hpp"

namespace dproj {

inline constexpr const char* kVersion = "dproj 1.0.0";

// GS1 / GS2 text formats. Run indices are relative to the offset line.
//   GS1 v1            GS2 v1
//   n=<int>           n=<int>
//   offset=<int>      offset=<int>,<int>
//   a-b ...           rows=<int>
//                     row=<j>:a-b ...
void write_gridset(std::ostream& os, const GridSet1& s);
void write_gridset(std::ostream& os, const GridSet2& s);
GridSet1 read_gridset1(std::istream& is);
GridSet2 read_gridset2(std::istream& is);
std::variant<GridSet1, GridSet2> read_gridset(std::istream& is);

void write_gridset_file(const std::string& path, const GridSet1& s);
void write_gridset_file(const std::string& path, const GridSet2& s);
std::variant<GridSet1, GridSet2> read_gridset_file(const std::string& path);

// DM1: header `DM1 v1`, `n=`, `offset=`, then `index weight` with index
// relative to the offset.
void write_measure(std::ostream& os, const DyadicMeasure1& mu);

struct MeasureLoad {
  DyadicMeasure1 measure;
  double drift = 0;      ///< |sum of weights - 1| before renormalising
  std::string warning;   ///< set when drift exceeds 1e-9
};
MeasureLoad read_measure(std::istream& is);
MeasureLoad read_measure_file(const std::string& path);
void write_measure_file(const std::string& path, const DyadicMeasure1& mu);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

struct RunConfig {
  std::uint64_t seed = 1;
  int n = 12;
  double kappa = 0.5;
  double sigma = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
  double epsilon = 0.05;
  double eta = 0.0;
  double fraction = 1.0;
  int threads = 1;
  std::string out;
  std::string command;

  /// Compact JSON with a fixed key order, plus the version string.
  [[nodiscard]] std::string to_json() const;
};

using CsvCell = std::variant<std::string, std::int64_t, double>;

/// CSV report: `# <config json>` line, header, rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const RunConfig& config, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

}  // namespace dproj
