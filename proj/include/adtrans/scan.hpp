#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adtrans/commands.hpp"

namespace adtrans {

/// Parameter path into the configuration tree:
///   peak                       every transition's peak
///   transitions[i].peak|center|width|delta   (i 0-based, as in error paths)
///   time.step, time.stop, time.start
///   monitor.threshold
///   propagation.length|dx|q|tau.step, propagation.mixing.peak|ramp|width
struct ScanAxis {
  std::string path;
  std::vector<double> values;

  /// count points from `from` to `to` inclusive; count 0 gives no points.
  static ScanAxis range(std::string path, double from, double to, int count, bool log = false);
};

/// Sets one parameter; throws ConfigError for an unknown path or a value
/// the schema rejects.
void apply_parameter(RunConfig& config, const std::string& path, double value);

struct ScanRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double max_ratio = std::numeric_limits<double>::quiet_NaN();
  double shock_length = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> w_slope;
  std::vector<double> w_end;
};

/// Runs `command` ("evolve" or "propagate") at every axis value, points in
/// parallel. A failing point is recorded in its row and the scan goes on.
std::vector<ScanRow> scan(const RunConfig& base, const ScanAxis& axis, const std::string& command);
Table scan_table(const std::vector<ScanRow>& rows, const std::string& parameter, int transitions);

int cmd_scan(const RunConfig& base, const ScanAxis& axis, const std::string& command,
             const std::optional<std::filesystem::path>& out, const RunInfo& info,
             std::ostream& log);

}  // namespace adtrans
