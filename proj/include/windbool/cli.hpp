#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "windbool/boolean.hpp"

namespace windbool::cli {

enum class Subcommand { BoolOp, Field, Audit };

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostic = 1;
inline constexpr int kExitParseOrIo = 2;
inline constexpr int kExitRobustness = 3;
inline constexpr int kExitInvalidArguments = 4;

struct GridSpec {
  int nx = 0, ny = 0, nz = 0;
  double min = 0.0, max = 0.0;
};

struct CliConfig {
  Subcommand subcommand = Subcommand::BoolOp;
  BoolOpSpec spec;
  std::filesystem::path a;
  std::filesystem::path b;
  std::filesystem::path output;
  std::filesystem::path points;  // field: CSV of query points
  std::optional<GridSpec> grid;  // field: regular lattice instead of points
  bool weld = false;
  bool verbose = false;
  unsigned threads = 0;  // 0 = auto
};

/// Parses "nx,ny,nz,min,max"; throws std::invalid_argument.
GridSpec parse_grid(const std::string& text);
/// Lattice points, x fastest, inclusive of both ends (a single sample sits at min).
std::vector<Point3> grid_points(const GridSpec& grid);

BoolOp parse_op(const std::string& name);
InsideRule parse_rule(const std::string& name);

int run_bool(const CliConfig& config, std::ostream& out, std::ostream& err);
int run_field(const CliConfig& config, std::ostream& out, std::ostream& err);
int run_audit(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace windbool::cli
