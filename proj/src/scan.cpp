#include "adtrans/scan.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <regex>

#include "adtrans/errors.hpp"

namespace adtrans {

using nlohmann::json;

ScanAxis ScanAxis::range(std::string path, double from, double to, int count, bool log) {
  ScanAxis a{std::move(path), {}};
  if (count < 0) throw ContractViolation("scan: count must be >= 0");
  if (log && !(from > 0.0 && to > 0.0)) throw ContractViolation("scan: log range needs positive ends");
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    a.values.push_back(log ? from * std::pow(to / from, f) : from + f * (to - from));
  }
  if (count > 1) a.values.back() = to;
  return a;
}

void apply_parameter(RunConfig& c, const std::string& path, double v) {
  Scenario& s = c.scenario;
  auto bad = [&](const std::string& why) { throw ConfigError("scan parameter " + path + ": " + why); };
  auto need_prop = [&]() -> PropagationConfig& {
    if (!c.propagation) bad("configuration has no 'propagation' section");
    return *c.propagation;
  };

  static const std::regex transition(R"(transitions\[(\d+)\]\.(peak|center|width|delta))");
  std::smatch m;
  if (path == "peak") {
    if (v < 0.0) bad("peak Rabi frequency must be >= 0");
    s = with_peak(s, v);
  } else if (std::regex_match(path, m, transition)) {
    const int i = std::stoi(m[1]);
    if (i >= s.scheme.transitions()) bad("transition index out of range");
    const std::string field = m[2];
    auto& e = s.train.envelopes[i];
    if (field == "peak") {
      if (v < 0.0) bad("peak Rabi frequency must be >= 0");
      e.peak_rabi = v;
    } else if (field == "center") {
      e.center = v;
    } else if (field == "width") {
      if (!(v > 0.0)) bad("width must be > 0");
      e.width = v;
    } else {
      auto one = s.detunings.one_photon();
      for (int t : s.scheme.groups()[s.scheme.group_of(i)]) one[t] = v;
      s.detunings = DetuningLadder(s.scheme, one);
    }
  } else if (path == "time.step") {
    if (!(v > 0.0)) bad("must be > 0");
    s.grid.step = v;
  } else if (path == "time.start") {
    s.grid.start = v;
  } else if (path == "time.stop") {
    s.grid.stop = v;
  } else if (path == "monitor.threshold") {
    s.monitor.threshold = v;
  } else if (path == "propagation.length") {
    if (v < 0.0) bad("must be >= 0");
    need_prop().grid.length = v;
  } else if (path == "propagation.dx") {
    if (!(v > 0.0)) bad("must be > 0");
    need_prop().grid.dx = v;
  } else if (path == "propagation.tau.step") {
    if (!(v > 0.0)) bad("must be > 0");
    need_prop().grid.dtau = v;
  } else if (path == "propagation.q") {
    if (!(v > 0.0)) bad("must be > 0");
    auto& p = need_prop();
    p.medium.q.assign(p.medium.q.size(), v);
    p.medium.alpha0.reset();
    p.medium.linewidth.reset();
  } else if (path == "propagation.mixing.peak" || path == "propagation.mixing.ramp" ||
             path == "propagation.mixing.width") {
    auto& p = need_prop();
    if (!p.mixing) bad("configuration has no mixing entrance");
    if (path.ends_with("peak")) {
      if (v < 0.0) bad("peak Rabi frequency must be >= 0");
      p.mixing->peak = v;
    } else {
      if (!(v > 0.0)) bad("must be > 0");
      (path.ends_with("ramp") ? p.mixing->ramp : p.mixing->width) = v;
    }
  } else {
    bad("unknown parameter path");
  }
}

std::vector<ScanRow> scan(const RunConfig& base, const ScanAxis& axis, const std::string& command) {
  if (command != "evolve" && command != "propagate") {
    throw ContractViolation("scan: command must be evolve or propagate");
  }
  if (!axis.values.empty()) {
    RunConfig probe = base;
    apply_parameter(probe, axis.path, axis.values.front());
  }
  std::vector<ScanRow> rows(axis.values.size());
  kernels::for_each_index(Exec::Parallel, rows.size(), [&](std::size_t k) {
    ScanRow& row = rows[k];
    row.value = axis.values[k];
    try {
      RunConfig c = base;
      apply_parameter(c, axis.path, row.value);
      if (command == "evolve") {
        const auto r = run_evolve(c);
        row.fidelity = r.final.adiabatic_fidelity;
        row.max_ratio = r.monitor.max_ratio;
        row.ok = all_pass(r.checks);
      } else {
        const auto r = run_propagate(c);
        if (r.fields.shock_x) row.shock_length = *r.fields.shock_x;
        row.w_slope = r.audit.slope;
        for (const auto& w : r.audit.W) row.w_end.push_back(w.back());
        row.ok = all_pass(r.checks);
      }
      if (!row.ok) row.error = "invariant check failed";
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

Table scan_table(const std::vector<ScanRow>& rows, const std::string& parameter, int transitions) {
  Table t;
  t.header.push_back(parameter);
  t.header.push_back("status");
  t.add_column_header("fidelity", "1");
  t.add_column_header("max_ratio", "1");
  t.add_column_header("shock_length", "length");
  for (int i = 1; i <= transitions; ++i) t.add_column_header("W_" + std::to_string(i) + "_slope", "1/(T length)");
  for (int i = 1; i <= transitions; ++i) t.add_column_header("W_" + std::to_string(i), "1/T");
  t.header.push_back("error");
  for (const auto& r : rows) {
    std::vector<std::string> cells{format_number(r.value), r.ok ? "ok" : "failed",
                                   format_number(r.fidelity), format_number(r.max_ratio),
                                   format_number(r.shock_length)};
    for (int i = 0; i < transitions; ++i) {
      cells.push_back(i < static_cast<int>(r.w_slope.size()) ? format_number(r.w_slope[i]) : "nan");
    }
    for (int i = 0; i < transitions; ++i) {
      cells.push_back(i < static_cast<int>(r.w_end.size()) ? format_number(r.w_end[i]) : "nan");
    }
    cells.push_back(r.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

int cmd_scan(const RunConfig& base, const ScanAxis& axis, const std::string& command,
             const std::optional<std::filesystem::path>& out, const RunInfo& info,
             std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = scan(base, axis, command);
  const Table table = scan_table(rows, axis.path, base.scenario.scheme.transitions());
  int failed = 0;
  for (const auto& r : rows) failed += !r.ok;
  log << "scan " << axis.path << ": " << rows.size() << " points, " << failed << " failed\n";
  if (!info.check_only) {
    const auto path = output_path(out, base.scenario.name + "_scan.csv");
    write_csv(path, table);
    auto stem = path;
    stem.replace_extension();
    write_json(stem.string() + ".manifest.json",
               {{"tool", kToolVersion},
                {"command", "scan"},
                {"subcommand", command},
                {"seed", info.seed},
                {"parameter", axis.path},
                {"values", axis.values},
                {"config", to_json(base)},
                {"failed_points", failed}});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(stem.string() + ".timing.json", {{"wall_time_s", wall}, {"threads", thread_count()}});
    log << "wrote " << path.string() << '\n';
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace adtrans
