#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "adtrans/commands.hpp"
#include "adtrans/errors.hpp"
#include "adtrans/kernels.hpp"
#include "adtrans/scan.hpp"

using namespace adtrans;

namespace {

template <class T>
std::optional<T> opt_if(const CLI::Option* o, const T& v) {
  return o->count() ? std::optional<T>(v) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic transfer and pulse propagation in chain-coupled multilevel atoms.\n"
               "Outputs default to $ADTRANS_OUT_DIR (or ./out) when --out is not given."};
  app.set_version_flag("--version", kToolVersion);
  app.fallthrough();

  std::string config_file, out_path;
  std::uint64_t seed = 20240601;
  int threads = 0;
  bool check = false;
  auto* config_opt = app.add_option("--config", config_file, "Scenario file (YAML)")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_path, "Output file or directory");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
  app.add_flag("--check", check, "Verify invariants only, write nothing; alone: run the built-in suite");

  auto* conditions = app.add_subcommand("conditions", "Verify transparency regimes on random draws");
  ConditionsOptions cond;
  bool independent = false;
  std::string report;
  conditions->add_option("--regime", cond.regime, "Regime name or 'all'")->capture_default_str();
  conditions->add_option("--trials", cond.trials, "Random draws per regime")->capture_default_str();
  auto* report_opt = conditions->add_option("--report", report, "Report file (JSON)");
  conditions->add_flag("--independent-fields", independent, "Treat every transition as its own field");

  std::string scenario_name;
  auto* quasi = app.add_subcommand("quasienergies", "Quasienergy branches over a scenario's time grid");
  auto* quasi_scn = quasi->add_option("--scenario", scenario_name, "Built-in scenario name");

  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the amplitude equations");
  auto* evolve_scn = evolve_cmd->add_option("--scenario", scenario_name, "Built-in scenario name");

  auto* propagate = app.add_subcommand("propagate", "March the reduced field equations along x");
  double length = 0, dx = 0, dtau = 0;
  auto* length_opt = propagate->add_option("--length", length, "Medium length");
  auto* dx_opt = propagate->add_option("--dx", dx, "x step");
  auto* dtau_opt = propagate->add_option("--dtau", dtau, "tau step");

  auto* scan_cmd = app.add_subcommand("scan", "Run a subcommand over a parameter range");
  std::string param, command = "evolve";
  double from = 0, to = 0;
  int count = 0;
  bool log_spacing = false;
  std::vector<double> values;
  auto* scan_scn = scan_cmd->add_option("--scenario", scenario_name, "Built-in scenario name");
  scan_cmd->add_option("--param", param, "Parameter path, e.g. peak or transitions[0].delta")->required();
  scan_cmd->add_option("--command", command, "evolve or propagate")->capture_default_str();
  scan_cmd->add_option("--from", from, "Range start");
  scan_cmd->add_option("--to", to, "Range end");
  scan_cmd->add_option("--count", count, "Number of points (0: empty table)");
  scan_cmd->add_flag("--log", log_spacing, "Logarithmic spacing");
  auto* values_opt = scan_cmd->add_option("--values", values, "Explicit values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);
  const RunInfo info{seed, check};
  const auto out = opt_if<std::filesystem::path>(out_opt, out_path);
  const auto cfg_path = opt_if<std::filesystem::path>(config_opt, config_file);

  try {
    if (*conditions) {
      cond.declare_degeneracy = !independent;
      cond.report = report_opt->count() ? std::optional<std::filesystem::path>(report) : out;
      return cmd_conditions(cond, info, std::cout);
    }
    if (*quasi) {
      return cmd_quasienergies(load_run_config(opt_if(quasi_scn, scenario_name), cfg_path), out, info, std::cout);
    }
    if (*evolve_cmd) {
      return cmd_evolve(load_run_config(opt_if(evolve_scn, scenario_name), cfg_path), out, info, std::cout);
    }
    if (*propagate) {
      if (!cfg_path) throw ContractViolation("propagate needs --config");
      PropagateOverrides o{opt_if(length_opt, length), opt_if(dx_opt, dx), opt_if(dtau_opt, dtau)};
      return cmd_propagate(with_overrides(parse_config(*cfg_path), o), out, info, std::cout);
    }
    if (*scan_cmd) {
      const RunConfig base = load_run_config(opt_if(scan_scn, scenario_name), cfg_path);
      ScanAxis axis = values_opt->count() ? ScanAxis{param, values}
                                          : ScanAxis::range(param, from, to, count, log_spacing);
      return cmd_scan(base, axis, command, out, info, std::cout);
    }
    if (check) {
      const auto checks = invariant_suite();
      print_checks(std::cout, checks);
      return all_pass(checks) ? 0 : 1;
    }
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
