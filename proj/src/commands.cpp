#include "adtrans/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "adtrans/errors.hpp"
#include "adtrans/kernels.hpp"
#include "adtrans/propagation.hpp"

namespace adtrans {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

Check check_below(const std::string& name, double value, double limit) {
  return {name, value < limit, sci(value) + " < " + sci(limit)};
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return a;
}

json manifest(const std::string& command, const json& resolved, const RunInfo& info,
              const std::vector<Check>& checks) {
  return {{"tool", kToolVersion},
          {"command", command},
          {"seed", info.seed},
          {"config", resolved},
          {"invariants", {{"pass", all_pass(checks)}, {"checks", checks_json(checks)}}}};
}

void write_timing(const std::filesystem::path& path, double wall, const RunInfo& info) {
  if (info.check_only) return;
  write_json(path, {{"wall_time_s", wall}, {"threads", thread_count()}});
}

std::filesystem::path sibling(const std::filesystem::path& csv, const std::string& suffix) {
  auto p = csv;
  p.replace_extension();
  return p.string() + suffix;
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
}

std::filesystem::path output_path(const std::optional<std::filesystem::path>& given,
                                  const std::string& fallback) {
  if (given) return *given;
  const char* env = std::getenv("ADTRANS_OUT_DIR");
  return std::filesystem::path(env && *env ? env : "out") / fallback;
}

RunConfig load_run_config(const std::optional<std::string>& scenario_name,
                          const std::optional<std::filesystem::path>& config) {
  if (scenario_name && config) throw ContractViolation("give either --scenario or --config, not both");
  if (config) return parse_config(*config);
  if (scenario_name) return RunConfig{scenario(*scenario_name), std::nullopt};
  throw ContractViolation("need --scenario or --config");
}

// ---------------------------------------------------------------- conditions

ConditionsResult run_conditions(const ConditionsOptions& options, const RunInfo& info) {
  if (options.trials < 1) throw ContractViolation("--trials must be >= 1");
  struct Job {
    const RegimeSpec* spec;
    bool declared;
    bool catalog;
  };
  std::vector<Job> jobs;
  if (options.regime == "all") {
    for (const auto& r : regime_catalog()) jobs.push_back({&r, true, true});
    jobs.push_back({&regime("lambda-delta1"), false, true});
    for (const auto& r : regime_variants()) jobs.push_back({&r, true, false});
  } else {
    const auto& r = regime(options.regime);
    const bool catalog = std::any_of(regime_catalog().begin(), regime_catalog().end(),
                                     [&](const RegimeSpec& c) { return c.name == r.name; });
    jobs.push_back({&r, options.declare_degeneracy, catalog});
  }

  ConditionsResult res;
  json regimes = json::array();
  for (const auto& job : jobs) {
    auto rep = verify_regime(*job.spec, options.trials, info.seed, job.declared);
    double worst_cf = -1.0, worst_res = 0.0;
    json trials = json::array();
    for (const auto& t : rep.results) {
      worst_cf = std::max(worst_cf, t.closed_form_residual);
      worst_res = std::max(worst_res, t.eigen_residual);
      json offending = json::array();
      for (int g : t.offending_fields) offending.push_back(g + 1);
      trials.push_back({{"trial", t.trial},
                        {"delta", t.delta},
                        {"rabi", t.rabi},
                        {"pinned", t.pinned},
                        {"eigen_residual", t.eigen_residual},
                        {"determinant", t.determinant},
                        {"gap", t.gap},
                        {"pinned_ok", t.eigen_hit},
                        {"dipole_sums", t.dipole_sums},
                        {"offending_fields", offending},
                        {"transparent", t.transparent},
                        {"closed_form_residual", t.closed_form_residual},
                        {"printed_normalizer_mismatch", t.printed_r_mismatch}});
    }
    const std::string label = rep.name + (job.declared ? "" : " (independent fields)");
    if (job.catalog) {
      res.checks.push_back({"pinning " + label, rep.eigen_hits == rep.trials,
                            std::to_string(rep.eigen_hits) + "/" + std::to_string(rep.trials) +
                                ", worst residual " + sci(worst_res)});
      if (job.spec->closed_form != ClosedForm::None && job.declared) {
        res.checks.push_back(check_below("closed form " + label, worst_cf, 1e-9));
      }
    }
    regimes.push_back({{"name", rep.name},
                       {"catalog", job.catalog},
                       {"degeneracy_declared", rep.degeneracy_declared},
                       {"trials", rep.trials},
                       {"pinned", rep.eigen_hits},
                       {"transparent", rep.transparent},
                       {"verdict_pinning", rep.eigen_hits == rep.trials},
                       {"verdict_transparent", rep.transparent == rep.trials},
                       {"worst_eigen_residual", worst_res},
                       {"worst_closed_form_residual", worst_cf},
                       {"results", trials}});
    res.reports.push_back(std::move(rep));
  }
  res.report = {{"tool", kToolVersion},
                {"command", "conditions"},
                {"seed", info.seed},
                {"trials", options.trials},
                {"pinning_tolerance", kPinningTolerance},
                {"dipole_tolerance", kDipoleTolerance},
                {"regimes", regimes},
                {"invariants", {{"pass", all_pass(res.checks)}, {"checks", checks_json(res.checks)}}}};
  return res;
}

int cmd_conditions(const ConditionsOptions& options, const RunInfo& info, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto res = run_conditions(options, info);
  log << std::left << std::setw(38) << "regime" << std::setw(10) << "pinned" << "transparent\n";
  for (const auto& r : res.reports) {
    const std::string label = r.name + (r.degeneracy_declared ? "" : " (independent fields)");
    log << std::setw(38) << label << std::setw(10)
        << (std::to_string(r.eigen_hits) + "/" + std::to_string(r.trials))
        << r.transparent << "/" << r.trials << '\n';
  }
  print_checks(log, res.checks);
  if (!info.check_only) {
    const auto path = output_path(options.report, "conditions.json");
    write_json(path, res.report);
    write_timing(sibling(path, ".timing.json"), seconds_since(t0), info);
    log << "report: " << path.string() << '\n';
  }
  return all_pass(res.checks) ? 0 : 1;
}

// ------------------------------------------------------------ quasienergies

QuasienergyResult run_quasienergies(const RunConfig& config) {
  const Scenario& s = config.scenario;
  QuasienergyResult r;
  const auto times = s.times();
  r.fan = quasienergy_fan(s.scheme, s.train, s.detunings, times);
  const int n = s.scheme.levels();
  r.table.add_column_header("t", "T");
  for (int b = 0; b < n; ++b) {
    r.table.add_column_header("lambda_" + std::to_string(b + 1) + " (delta_" +
                                  std::to_string(r.fan.labels[b]) + ")",
                              "1/T");
  }
  double trace = 0.0;
  for (double d : s.detunings.multi_photon()) trace += d;
  double worst = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<double> row{times[j]};
    double sum = 0.0, scale = 1.0;
    for (int b = 0; b < n; ++b) {
      row.push_back(r.fan.branches[b][j]);
      sum += r.fan.branches[b][j];
      scale = std::max(scale, std::abs(r.fan.branches[b][j]));
    }
    worst = std::max(worst, std::abs(sum - trace) / scale);
    r.table.add_row(row);
  }
  r.checks.push_back(check_below("branch sum equals trace", worst, 1e-9));
  std::vector<int> labels = r.fan.labels;
  std::sort(labels.begin(), labels.end());
  bool perm = true;
  for (int k = 0; k < n; ++k) perm = perm && labels[k] == k;
  r.checks.push_back({"every branch labelled by one delta_k", perm, ""});
  return r;
}

int cmd_quasienergies(const RunConfig& config, const std::optional<std::filesystem::path>& out,
                      const RunInfo& info, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto r = run_quasienergies(config);
  log << "branches: " << r.fan.branch_count() << ", degeneracy events: " << r.fan.crossings.size()
      << '\n';
  print_checks(log, r.checks);
  if (!info.check_only) {
    const auto path = output_path(out, config.scenario.name + "_quasienergies.csv");
    write_csv(path, r.table);
    json m = manifest("quasienergies", to_json(config), info, r.checks);
    json ev = json::array();
    for (const auto& c : r.fan.crossings) {
      ev.push_back({{"t", r.fan.times[c.time_index]},
                    {"branches", {c.branch_a + 1, c.branch_b + 1}},
                    {"gap", c.gap}});
    }
    m["degeneracy_events"] = ev;
    write_json(sibling(path, ".manifest.json"), m);
    write_timing(sibling(path, ".timing.json"), seconds_since(t0), info);
    log << "wrote " << path.string() << '\n';
  }
  return all_pass(r.checks) ? 0 : 1;
}

// ------------------------------------------------------------------- evolve

EvolveResult run_evolve(const RunConfig& config) {
  const Scenario& s = config.scenario;
  EvolveResult r;
  r.trajectory = evolve(s.scheme, s.train, s.detunings, s.psi0(), s.grid);
  r.fan = quasienergy_fan(s.scheme, s.train, s.detunings, r.trajectory.times);
  r.monitor = adiabaticity_monitor(r.fan, r.trajectory, s.monitor);
  r.final = final_report(r.fan, r.trajectory);

  const int n = s.scheme.levels();
  r.table.add_column_header("t", "T");
  for (int k = 1; k <= n; ++k) {
    r.table.add_column_header("rho_" + std::to_string(k) + std::to_string(k), "1");
  }
  for (int i = 1; i < n; ++i) r.table.add_column_header("Omega_" + std::to_string(i), "1/T");
  r.table.add_column_header("gap", "1/T");
  r.table.add_column_header("ratio", "1");
  const auto& tr = r.trajectory;
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    std::vector<double> row{tr.times[j]};
    row.insert(row.end(), tr.populations[j].begin(), tr.populations[j].end());
    row.insert(row.end(), tr.rabi[j].begin(), tr.rabi[j].end());
    row.push_back(r.monitor.min_gap[j]);
    row.push_back(r.monitor.ratio[j]);
    r.table.add_row(row);
  }

  r.checks.push_back(check_below("norm conservation", tr.max_norm_error(), 1e-6));
  r.summary = {{"final_populations", r.final.bare},
               {"adiabatic_branch", r.final.branch + 1},
               {"adiabatic_fidelity", r.final.adiabatic_fidelity},
               {"max_nonadiabatic_ratio", r.monitor.max_ratio},
               {"adiabatic", r.monitor.adiabatic},
               {"max_norm_error", tr.max_norm_error()},
               {"samples", tr.times.size()}};
  return r;
}

int cmd_evolve(const RunConfig& config, const std::optional<std::filesystem::path>& out,
               const RunInfo& info, std::ostream& log) {
  const auto t0 = Clock::now();
  EvolveResult r;
  try {
    r = run_evolve(config);
  } catch (const IntegrationFailure& e) {
    log << "FAIL norm conservation  (" << e.what() << ")\n";
    return 1;
  }
  log << "final populations:";
  for (double p : r.final.bare) log << ' ' << std::setprecision(6) << std::fixed << p;
  log << std::defaultfloat << "\nadiabatic fidelity " << r.final.adiabatic_fidelity
      << ", max nonadiabatic ratio " << r.monitor.max_ratio
      << (r.monitor.adiabatic ? " (adiabatic)" : " (nonadiabatic)") << '\n';
  print_checks(log, r.checks);
  if (!info.check_only) {
    const auto path = output_path(out, config.scenario.name + "_evolve.csv");
    write_csv(path, r.table);
    json m = manifest("evolve", to_json(config), info, r.checks);
    m["summary"] = r.summary;
    write_json(sibling(path, ".manifest.json"), m);
    write_timing(sibling(path, ".timing.json"), seconds_since(t0), info);
    log << "wrote " << path.string() << '\n';
  }
  return all_pass(r.checks) ? 0 : 1;
}

// ---------------------------------------------------------------- propagate

RunConfig with_overrides(RunConfig config, const PropagateOverrides& o) {
  if (!config.propagation) throw ConfigError("configuration has no 'propagation' section");
  auto& g = config.propagation->grid;
  if (o.length) g.length = *o.length;
  if (o.dx) g.dx = *o.dx;
  if (o.dtau) g.dtau = *o.dtau;
  try {
    g.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("propagation grid: ") + e.what());
  }
  return config;
}

namespace {

double profile_peak(const Profile& f, const PropagationGrid& g) {
  double m = 0.0;
  for (double t : g.tau()) m = std::max(m, f(t));
  return m;
}

double profile_area(const Profile& f, const PropagationGrid& g) {
  const auto tau = g.tau();
  double s = 0.0;
  for (std::size_t j = 1; j < tau.size(); ++j) s += 0.5 * (f(tau[j]) + f(tau[j - 1])) * (tau[j] - tau[j - 1]);
  return s;
}

}  // namespace

PropagateResult run_propagate(const RunConfig& config) {
  if (!config.propagation) throw ConfigError("configuration has no 'propagation' section");
  const Scenario& s = config.scenario;
  const PropagationConfig& p = *config.propagation;
  const std::string kind = system_kind(s.scheme);
  const EntranceFields entrance = entrance_fields(config);
  PropagateResult r;

  LengthParams lp;
  lp.q = p.medium.q.front();
  if (kind == "M") {
    const Profile o0 = p.mixing ? p.mixing->omega0_sq()
                                : Profile([&](double t) { return entrance.omega_sq[0](t) + entrance.omega_sq[1](t); });
    lp.omega0_sq = profile_peak(o0, p.grid);
    lp.T = p.mixing ? p.mixing->ramp : s.train.envelopes[0].width;
    r.lengths = adiabaticity_lengths("M", lp);
  } else if (kind == "W") {
    lp.omega0_sq = profile_peak([&](double t) { return entrance.omega_sq[2](t) + entrance.omega_sq[3](t); }, p.grid);
    lp.T = s.train.envelopes[0].width;
    lp.T1 = s.train.envelopes[3].width;
    lp.delta1 = s.detunings.multi_photon()[1];
    lp.omega01_sq = profile_peak(entrance.omega_sq[0], p.grid);
    lp.W0 = profile_area(entrance.omega_sq[0], p.grid);
    lp.q1 = p.medium.q.front();
    r.lengths = adiabaticity_lengths("W", lp);
  }

  if (p.model == "reduced") {
    ReducedOptions opt;
    opt.invariant_pairs = p.invariant_pairs;
    r.fields = propagate_reduced(s.scheme, entrance, p.medium, regime(p.closure), p.grid, opt);
  } else if (kind == "M") {
    Profile th0, o0;
    if (p.mixing) {
      th0 = p.mixing->theta0();
      o0 = p.mixing->omega0_sq();
    } else {
      th0 = [e = entrance](double t) { return std::atan2(std::sqrt(e.omega_sq[0](t)), std::sqrt(e.omega_sq[1](t))); };
      o0 = [e = entrance](double t) { return e.omega_sq[0](t) + e.omega_sq[1](t); };
    }
    r.fields = m_system_transport(th0, o0, p.medium.q.front(), p.grid);
  } else {
    WEntrance w;
    w.omega1_sq = entrance.omega_sq[0];
    w.omega0_sq = [e = entrance](double t) { return e.omega_sq[2](t) + e.omega_sq[3](t); };
    w.theta2 = [e = entrance](double t) { return std::atan2(std::sqrt(e.omega_sq[2](t)), std::sqrt(e.omega_sq[3](t))); };
    w.delta1 = s.detunings.multi_photon()[1];
    r.fields = w_system_transport(w, p.medium, p.grid);
  }
  r.audit = energy_audit(r.fields);

  const auto& d = r.fields.diagnostics;
  const double drift = d.invariant_drift.empty() ? 0.0 : *std::max_element(d.invariant_drift.begin(), d.invariant_drift.end());
  const double ddrift = d.detuning_drift.empty() ? 0.0 : *std::max_element(d.detuning_drift.begin(), d.detuning_drift.end());
  r.checks.push_back(check_below("pair invariant drift", drift, 1e-6));
  if (p.model == "reduced") r.checks.push_back(check_below("detuning flatness", ddrift, 1e-8));

  json lengths = json::object();
  for (const auto& [k, v] : r.lengths) lengths[k] = {{"value", v.value}, {"criterion", v.criterion}};
  json slopes = json::array();
  for (double v : r.audit.slope) slopes.push_back(v);
  r.summary = {{"kind", r.fields.kind},
               {"x_end", r.fields.x.empty() ? 0.0 : r.fields.x.back()},
               {"shock", r.fields.shock},
               {"shock_x", r.fields.shock_x ? json(*r.fields.shock_x) : json(nullptr)},
               {"truncated", r.fields.truncated},
               {"length_scales", lengths},
               {"energy_slopes", slopes},
               {"max_invariant_drift", drift},
               {"max_detuning_drift", ddrift},
               {"warnings", r.audit.warnings}};
  return r;
}

namespace {

Table slice_table(const FieldGrid& f, const std::vector<std::vector<double>>& rows,
                  const std::string& unit) {
  Table t;
  t.add_column_header("tau", "T");
  for (double x : f.x) t.add_column_header("x=" + format_number(x), unit);
  for (std::size_t j = 0; j < f.tau.size(); ++j) {
    std::vector<double> row{f.tau[j]};
    for (const auto& slice : rows) row.push_back(slice[j]);
    t.add_row(row);
  }
  return t;
}

}  // namespace

int cmd_propagate(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir,
                  const RunInfo& info, std::ostream& log) {
  const auto t0 = Clock::now();
  PropagateResult r;
  try {
    r = run_propagate(config);
  } catch (const IntegrationFailure& e) {
    log << "FAIL integration  (" << e.what() << ")\n";
    return 1;
  }
  const auto& f = r.fields;
  log << f.kind << ": reached x = " << (f.x.empty() ? 0.0 : f.x.back());
  if (f.shock_x) log << ", shock at x = " << *f.shock_x;
  log << '\n';
  for (const auto& [k, v] : r.lengths) log << "  " << k << " = " << v.value << '\n';
  for (const auto& w : r.audit.warnings) log << "warning: " << w << '\n';
  print_checks(log, r.checks);
  if (info.check_only) return all_pass(r.checks) ? 0 : 1;

  const auto dir = output_path(out_dir, config.scenario.name + "_propagate");
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < f.omega_sq.size(); ++i) {
    write_csv(dir / ("omega_sq_" + std::to_string(i + 1) + ".csv"), slice_table(f, f.omega_sq[i], "1/T^2"));
  }
  for (std::size_t i = 0; i < f.delta.size(); ++i) {
    write_csv(dir / ("delta_" + std::to_string(i + 1) + ".csv"), slice_table(f, f.delta[i], "1/T"));
  }
  if (!f.theta.empty()) write_csv(dir / "theta.csv", slice_table(f, f.theta, "rad"));
  if (!f.phi.empty()) write_csv(dir / "phi.csv", slice_table(f, f.phi, "rad"));
  if (!f.theta_char.empty()) write_csv(dir / "theta_char.csv", slice_table(f, f.theta_char, "rad"));

  Table diag;
  diag.add_column_header("x", "length");
  diag.add_column_header("invariant_drift", "1");
  diag.add_column_header("max_dtheta_dtau", "rad/T");
  diag.add_column_header("detuning_drift", "1/T");
  for (std::size_t i = 0; i < r.audit.W.size(); ++i) diag.add_column_header("W_" + std::to_string(i + 1), "1/T");
  const auto& d = f.diagnostics;
  for (std::size_t k = 0; k < d.x.size(); ++k) {
    std::vector<double> row{d.x[k], d.invariant_drift[k], d.max_dtheta[k], d.detuning_drift[k]};
    for (const auto& w : r.audit.W) row.push_back(k < w.size() ? w[k] : std::nan(""));
    diag.add_row(row);
  }
  write_csv(dir / "diagnostics.csv", diag);

  json m = manifest("propagate", to_json(config), info, r.checks);
  m["summary"] = r.summary;
  write_json(dir / "manifest.json", m);
  write_timing(dir / "timing.json", seconds_since(t0), info);
  log << "wrote " << dir.string() << '\n';
  return all_pass(r.checks) ? 0 : 1;
}

// ---------------------------------------------------------- invariant suite

std::vector<Check> invariant_suite() {
  std::vector<Check> out;
  const std::uint64_t seed = 7;

  for (const auto& spec : regime_catalog()) {
    const auto rep = verify_regime(spec, 20, seed);
    out.push_back({"pinning " + spec.name, rep.eigen_hits == rep.trials,
                   std::to_string(rep.eigen_hits) + "/" + std::to_string(rep.trials)});
  }

  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-10.0, 10.0), uo(0.5, 10.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> delta{0.0}, rabi;
      for (int k = 1; k < 5; ++k) delta.push_back(ud(rng));
      for (int i = 0; i < 4; ++i) rabi.push_back(uo(rng));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_hamiltonian(delta, rabi));
      for (int b = 0; b < 5; ++b) {
        CVector v = es.eigenvectors().col(b).cast<Complex>();
        const auto dip = transition_dipoles(v);
        for (int i = 0; i < 4; ++i) {
          const double h = 1e-5;
          auto rp = rabi, rm = rabi;
          rp[i] += h;
          rm[i] -= h;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(real_hamiltonian(delta, rp), Eigen::EigenvaluesOnly);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(real_hamiltonian(delta, rm), Eigen::EigenvaluesOnly);
          const double fd = (ep.eigenvalues()[b] - em.eigenvalues()[b]) / (2 * h);
          const double hf = 2.0 * dip[i].real();
          worst = std::max(worst, std::abs(fd - hf) / std::max(1.0, std::abs(fd)));
        }
      }
    }
    out.push_back(check_below("Hellmann-Feynman vs finite differences", worst, 1e-6));
  }

  {
    const Scenario s = scenario("fig2_m_stirap");
    std::vector<double> times;
    for (int j = 0; j <= 200; ++j) times.push_back(-6.0 + 0.06 * j);
    const auto a = kernels::eigen_series_serial(s.scheme, s.train, s.detunings.multi_photon(), times);
    const auto b = kernels::eigen_series_omp(s.scheme, s.train, s.detunings.multi_photon(), times);
    bool same = true;
    for (std::size_t j = 0; j < a.size(); ++j) {
      same = same && a[j].values == b[j].values && a[j].vectors == b[j].vectors;
    }
    out.push_back({"serial and parallel eigen series agree", same, ""});
  }

  {
    Scenario s = scenario("fig2_m_stirap");
    s.grid.step = 5e-4;
    s.grid.stride = 20;
    const auto tr = evolve(s.scheme, s.train, s.detunings, s.psi0(), s.grid);
    out.push_back(check_below("norm conservation (fig2, coarse)", tr.max_norm_error(), 1e-6));
  }

  {
    const auto path = scenario_dir() / "fig2_m_stirap.yaml";
    bool same = false;
    std::string detail = path.string();
    try {
      same = parse_config(path).scenario == scenario("fig2_m_stirap");
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out.push_back({"shipped fig2 file matches built-in scenario", same, detail});
  }
  return out;
}

}  // namespace adtrans
