#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "factoria/acceptance.hpp"
#include "factoria/counter.hpp"

namespace factoria::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string set_text;
  std::vector<std::uint64_t> Ns;
  int digits = 30;
  std::optional<std::uint64_t> euler_product_bound;
  std::optional<std::uint64_t> em_cutoff;
  int K = 4;
  std::uint64_t seed = 1;
  std::uint64_t count = 1000;
  bool gof = false;
  std::vector<double> z;
  std::optional<Format> format;  // unset: the command's natural format
  std::string output;            // empty: stdout
  IntegerWidth width = IntegerWidth::Bits128;
  std::string cache;
  bool plot = false;
  Suite suite = Suite::Quick;

  PrecisionContext precision() const;
};

// Throws UsageError; returns nullopt when help or version was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes one command. Errors propagate as exceptions.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with exceptions mapped to exit codes:
// 0 ok, 1 domain, 2 usage, 3 resource.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct PlotPoint {
  double x;
  double y;
};
struct PlotSeries {
  std::string name;
  std::vector<PlotPoint> points;
};

// Tidy long-format CSV with header x,y,series.
std::string emit_plot_data(const std::vector<PlotSeries>& series);

// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::string& path, const std::string& contents);

// Parallelism cap from FACTORIA_THREADS, at least 1.
unsigned thread_budget();

}  // namespace factoria::cli
