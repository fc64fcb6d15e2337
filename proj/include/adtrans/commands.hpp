#pragma once

// Subcommands of the adtrans tool. Each run_* computes without touching
// the filesystem; each cmd_* writes its files and returns the exit code
// (0 only when every invariant check of the run passed).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adtrans/config.hpp"
#include "adtrans/dynamics.hpp"
#include "adtrans/output.hpp"
#include "adtrans/quasienergy.hpp"
#include "adtrans/regimes.hpp"

namespace adtrans {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool all_pass(const std::vector<Check>& checks);
void print_checks(std::ostream& os, const std::vector<Check>& checks);

/// Output location: explicit path, else $ADTRANS_OUT_DIR (default "out")
/// joined with `fallback`.
std::filesystem::path output_path(const std::optional<std::filesystem::path>& given,
                                  const std::string& fallback);

/// --scenario name or --config file (exactly one).
RunConfig load_run_config(const std::optional<std::string>& scenario_name,
                          const std::optional<std::filesystem::path>& config);

struct RunInfo {
  std::uint64_t seed = 1;
  bool check_only = false;  // compute and verify, write nothing
};

// conditions

struct ConditionsOptions {
  std::string regime = "all";  // catalog name, variant name or "all"
  int trials = 200;
  bool declare_degeneracy = true;
  std::optional<std::filesystem::path> report;
};

struct ConditionsResult {
  std::vector<RegimeReport> reports;
  std::vector<Check> checks;
  nlohmann::json report;
};

/// "all" runs the catalog with degeneracy declared, lambda-delta1 without
/// it, and the literal variants kept for arbitration.
ConditionsResult run_conditions(const ConditionsOptions& options, const RunInfo& info);
int cmd_conditions(const ConditionsOptions& options, const RunInfo& info, std::ostream& log);

// quasienergies

struct QuasienergyResult {
  QuasienergyFan fan;
  Table table;
  std::vector<Check> checks;
};

QuasienergyResult run_quasienergies(const RunConfig& config);
int cmd_quasienergies(const RunConfig& config, const std::optional<std::filesystem::path>& out,
                      const RunInfo& info, std::ostream& log);

// evolve

struct EvolveResult {
  AmplitudeTrajectory trajectory;
  QuasienergyFan fan;
  AdiabaticityMonitor monitor;
  FinalReport final;
  Table table;  // t, rho_kk, Omega_i, gap, ratio
  std::vector<Check> checks;
  nlohmann::json summary;
};

EvolveResult run_evolve(const RunConfig& config);
int cmd_evolve(const RunConfig& config, const std::optional<std::filesystem::path>& out,
               const RunInfo& info, std::ostream& log);

// propagate

struct PropagateOverrides {
  std::optional<double> length;
  std::optional<double> dx;
  std::optional<double> dtau;
};

struct PropagateResult {
  FieldGrid fields;
  EnergyAudit audit;
  std::map<std::string, LengthScale> lengths;
  std::vector<Check> checks;
  nlohmann::json summary;
};

RunConfig with_overrides(RunConfig config, const PropagateOverrides& overrides);
PropagateResult run_propagate(const RunConfig& config);
/// One CSV per field (rows tau, columns x), diagnostics.csv, manifest.json
/// and timing.json in the output directory.
int cmd_propagate(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir,
                  const RunInfo& info, std::ostream& log);

/// Built-in invariant suite behind --check without a subcommand.
std::vector<Check> invariant_suite();

}  // namespace adtrans
