// Acceptance criteria 1-11: one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adtrans/commands.hpp"
#include "adtrans/config.hpp"
#include "adtrans/errors.hpp"
#include "adtrans/propagation.hpp"
#include "adtrans/regimes.hpp"
#include "adtrans/scan.hpp"

using namespace adtrans;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const RegimeReport& find(const std::vector<RegimeReport>& reps, const std::string& name,
                         bool declared) {
  for (const auto& r : reps) {
    if (r.name == name && r.degeneracy_declared == declared) return r;
  }
  throw std::runtime_error("missing report " + name);
}

Verdict c1_catalog() {
  ConditionsOptions o;
  o.trials = 200;
  const auto res = run_conditions(o, RunInfo{20240601, true});
  std::ostringstream d;
  bool ok = true;
  for (const auto& spec : regime_catalog()) {
    const auto& r = find(res.reports, spec.name, true);
    if (r.eigen_hits != r.trials) {
      ok = false;
      d << spec.name << " pinned " << r.eigen_hits << "/" << r.trials << "; ";
    }
  }
  for (const char* name : {"lambda-dark", "a", "b", "c", "d", "lambda-delta1"}) {
    const auto& r = find(res.reports, name, true);
    if (r.transparent != r.trials) {
      ok = false;
      d << name << " transparent " << r.transparent << "/" << r.trials << "; ";
    }
  }
  const auto& indep = find(res.reports, "lambda-delta1", false);
  if (indep.transparent == indep.trials) {
    ok = false;
    d << "lambda-delta1 transparent without declared degeneracy; ";
  }
  d << "lambda-delta1 independent fields transparent " << indep.transparent << "/" << indep.trials;
  return {ok, d.str()};
}

Verdict c2_closed_forms() {
  double worst = 0.0;
  int forms = 0;
  for (const auto& spec : regime_catalog()) {
    if (spec.closed_form == ClosedForm::None) continue;
    ++forms;
    const auto rep = verify_regime(spec, 100, 99, true);
    for (const auto& t : rep.results) worst = std::max(worst, t.closed_form_residual);
  }
  // W shared-field state with Omega_3 = 0 against the Lambda shared-field state on levels 1-3
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  double reduction = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double om = u(rng), d1 = u(rng) * (trial % 2 ? 1 : -1), om4 = u(rng);
    const std::vector<double> delta5{0, d1, 2 * d1, 3 * d1, d1};
    const Eigen::VectorXd w = closed_form_vector(ClosedForm::WShared, {om, om, 0.0, om4}, delta5);
    const Eigen::VectorXd l = closed_form_vector(ClosedForm::LambdaShared, {om, om}, {0, d1, 2 * d1});
    Eigen::VectorXd head = w.head(3) / w.norm();
    const Eigen::VectorXd ref = l / l.norm();
    reduction = std::max({reduction, (head - ref).cwiseAbs().maxCoeff(), std::abs(w[3]) / w.norm(),
                          std::abs(w[4]) / w.norm()});
  }
  return {forms == 6 && worst < 1e-9 && reduction < 1e-10,
          fmt("%.0f forms, worst residual %.2e (limit 1e-9), W->Lambda reduction deviation %.2e (limit 1e-10)",
              forms, worst, reduction)};
}

Verdict c3_hellmann_feynman() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(-8.0, 8.0), uo(0.3, 6.0);
  const LevelScheme ladder = LevelScheme::ladder();
  int instances = 0;
  double worst = 0.0;
  while (instances < 100) {
    std::vector<double> one(4), rabi(4);
    for (auto& x : one) x = ud(rng);
    for (auto& x : rabi) x = uo(rng);
    const DetuningLadder det(ladder, one);
    const auto h = build_hamiltonian(ladder, rabi, det);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
    const auto& w = es.eigenvalues();
    const double norm = w.cwiseAbs().maxCoeff();
    double gap = norm;
    for (int b = 1; b < 5; ++b) gap = std::min(gap, w[b] - w[b - 1]);
    if (gap < 1e-2 * norm) continue;
    ++instances;
    for (int b = 0; b < 5; ++b) {
      const CVector v = es.eigenvectors().col(b);
      const auto dip = dipole_moments(ladder.independent(), h, v);
      for (int i = 0; i < 4; ++i) {
        auto lam = [&](double step) {
          auto r = rabi;
          r[i] += step;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e(build_hamiltonian(ladder, r, det).matrix,
                                                            Eigen::EigenvaluesOnly);
          return e.eigenvalues()[b];
        };
        const double s = 1e-3;
        const double d1 = (lam(s) - lam(-s)) / (2 * s);
        const double d2 = (lam(s / 2) - lam(-s / 2)) / s;
        const double fd = (4 * d2 - d1) / 3;
        const double hf = 2.0 * dip[i].real();
        worst = std::max(worst, std::abs(hf - fd) / std::max(std::abs(fd), 1.0));
      }
    }
  }
  return {worst < 1e-6, fmt("100 instances, worst relative deviation %.2e (limit 1e-6)", worst)};
}

Verdict c4_fig2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_evolve(RunConfig{scenario("fig2_m_stirap"), std::nullopt});
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double p55 = r.trajectory.final_populations()[4];
  const double m22 = r.trajectory.max_population(1), m44 = r.trajectory.max_population(3);
  return {p55 > 0.99 && m22 < 0.05 && m44 < 0.05 && sec < 10.0,
          fmt("rho55 %.6f, max rho22 %.4f, max rho44 %.4f, %.2f s", p55, m22, m44, sec)};
}

Verdict c5_fig3() {
  const auto r = run_evolve(RunConfig{scenario("fig3_w_transfer"), std::nullopt});
  const auto p = r.trajectory.final_populations();
  const auto back = run_evolve(RunConfig{scenario("w_return"), std::nullopt});
  const double p22 = back.trajectory.final_populations()[1];
  return {p[4] > 0.99 && p[4] - p[3] > 0.9 && p22 > 0.99,
          fmt("rho55 %.6f, rho55-rho44 %.6f, w_return rho22 %.6f", p[4], p[4] - p[3], p22)};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Propagation runs shared by criteria 6, 9 and 10.
struct Runs {
  RunConfig mcfg, wcfg;
  PropagateResult m, w;
};

const Runs& runs() {
  static const Runs r = [] {
    Runs x;
    x.mcfg = parse_config(scenario_dir() / "m_propagation.yaml");
    x.wcfg = parse_config(scenario_dir() / "w_propagation.yaml");
    x.m = run_propagate(x.mcfg);
    x.w = run_propagate(x.wcfg);
    return x;
  }();
  return r;
}

Verdict c6_invariants() {
  const auto& r = runs();
  const double lm = r.m.lengths.at("L_shock_M").value;
  const double lw = r.w.lengths.at("L_shock_W").value;
  const double xm = r.m.fields.x.back(), xw = r.w.fields.x.back();
  const auto& dm = r.m.fields.diagnostics;
  const auto& dw = r.w.fields.diagnostics;
  const double drift = std::max(max_of(dm.invariant_drift), max_of(dw.invariant_drift));
  const double flat = std::max(max_of(dm.detuning_drift), max_of(dw.detuning_drift));
  const bool span = xm >= 0.3 * lm * (1 - 1e-12) && xw >= 0.3 * lw;
  return {span && drift < 1e-6 && flat < 1e-8,
          fmt("M to %.3g L_shock, W to %.3g L_shock; drift %.2e (limit 1e-6), detuning %.2e (limit 1e-8)",
              xm / lm, xw / lw, drift, flat)};
}

Profile profile(int kind) {
  if (kind == 0) return [](double t) { return 0.25 * std::numbers::pi * (1 + std::tanh(t)); };
  if (kind == 1) return [](double t) { return 0.25 * std::numbers::pi * (1 + std::erf(t)); };
  return [](double t) {
    if (t <= -1) return 0.0;
    if (t >= 1) return std::numbers::pi / 2;
    const double s = std::sin(0.25 * std::numbers::pi * (t + 1));
    return 0.5 * std::numbers::pi * s * s;
  };
}

Profile envelope_sq(double peak, double width) {
  return [=](double t) { return peak * peak * std::exp(-(t / width) * (t / width)); };
}

Verdict c7_characteristics() {
  const double om = 20.0, q = 1.0;
  const double l = om * om / (q * kMTransportFMax);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    PropagationGrid g;
    g.length = 0.3 * l;
    g.dx = l / 400;
    g.tau_start = -12;
    g.tau_stop = 12;
    g.dtau = 0.01;
    g.store_every = 1000000;
    const auto f = m_system_transport(profile(k), envelope_sq(om, 3.0), q, g);
    const auto& a = f.theta.back();
    const auto& b = f.theta_char.back();
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  return {worst < 1e-3, fmt("tanh, erf, sin^2 entrances: max |theta - theta_char| %.2e rad (limit 1e-3)", worst)};
}

Verdict c8_shock() {
  std::ostringstream d;
  bool ok = true;
  for (double om : {10.0, 20.0, 40.0}) {
    const double l = om * om / kMTransportFMax;
    PropagationGrid g;
    g.length = 3 * l;
    g.dx = l / 400;
    g.tau_start = -12;
    g.tau_stop = 12;
    g.dtau = 0.01;
    g.store_every = 1000000;
    const auto f = m_system_transport(profile(0), envelope_sq(om, 3.0), 1.0, g);
    const double ratio = f.shock_x ? *f.shock_x / l : std::nan("");
    ok = ok && f.shock_x && ratio > 0.5 && ratio < 2.0;
    d << fmt("Omega0 %.0f: shock at %.3f L; ", om, ratio);

    PropagationGrid lin = g;
    lin.length = 10 * l;
    lin.dx = l / 40;
    lin.tau_start = -24;
    lin.tau_stop = 24;
    lin.dtau = 0.02;
    const Profile small = [](double t) { return 0.025 * (1 + std::tanh(t)); };
    const auto fl = m_system_transport(small, envelope_sq(om, 6.0), 1.0, lin);
    ok = ok && !fl.shock && fl.x.back() >= 10 * l * (1 - 1e-12);
    d << (fl.shock ? "linear run shocked; " : "linear run clear to 10 L; ");
  }
  return {ok, d.str()};
}

Verdict c9_depletion() {
  RunConfig c = parse_config(scenario_dir() / "w_propagation.yaml");
  apply_parameter(c, "transitions[0].peak", 10.0);
  apply_parameter(c, "transitions[1].peak", 10.0);
  const double q1 = c.propagation->medium.q[0];
  const auto probe = run_propagate(with_overrides(c, {0.0, std::nullopt, std::nullopt}));
  const double w0 = probe.audit.W[0].front();
  // complete-transfer window: the first 30% of the depletion length
  c = with_overrides(c, {0.3 * w0 / q1, 0.25, std::nullopt});
  c.propagation->grid.store_every = 8;
  const auto r = run_propagate(c);
  const auto [slope, icpt] = fit_line(r.audit.x, r.audit.W[0]);
  const double ldep = icpt / -slope;
  const double es = std::abs(slope / -q1 - 1), el = std::abs(ldep / (w0 / q1) - 1);
  return {es < 0.02 && el < 0.05,
          fmt("slope %.5f (-q1 = %.1f), depletion length %.2f vs W0/q1 = %.2f", slope, -q1, ldep, w0 / q1)};
}

Verdict c10_direction() {
  const auto& r = runs();
  const auto& w = r.w.fields;
  const auto& m = r.m.fields;
  const double half = std::numbers::pi / 4;
  const double w0 = crossing_time(w.tau, w.theta.front(), half), w1 = crossing_time(w.tau, w.theta.back(), half);
  const double m0 = crossing_time(m.tau, m.theta.front(), half), m1 = crossing_time(m.tau, m.theta.back(), half);
  return {w1 < w0 && m1 > m0,
          fmt("W theta2 half-max %.5f -> %.5f, M theta %.5f -> %.5f", w0, w1, m0, m1)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict c11_determinism() {
  const fs::path root = fs::temp_directory_path() / "adtrans_acceptance";
  fs::remove_all(root);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(scenario_dir())) {
    if (e.path().extension() == ".yaml") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  int scenarios = 0;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    for (const auto& f : files) {
      const bool prop = parse_config(f).propagation.has_value();
      const std::string cmd = std::string(ADTRANS_BIN) + (prop ? " propagate" : " evolve") +
                              " --config " + f.string() + " --out " +
                              (dir / (f.stem().string() + (prop ? "" : ".csv"))).string() +
                              " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
      scenarios += run == 0;
    }
    const std::string cmd = std::string(ADTRANS_BIN) + " conditions --trials 50 --report " +
                            (dir / "conditions.json").string() + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  int compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "run0")) {
    if (!e.is_regular_file() || e.path().filename().string().find("timing") != std::string::npos) continue;
    const fs::path other = root / "run1" / fs::relative(e.path(), root / "run0");
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      return {false, "differs: " + fs::relative(e.path(), root).string()};
    }
    ++compared;
  }
  return {compared > 0, fmt("%.0f scenario files, %.0f output files byte-identical", scenarios, compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"regime catalog", c1_catalog},
      {"closed-form states", c2_closed_forms},
      {"Hellmann-Feynman vs finite differences", c3_hellmann_feynman},
      {"M-system STIRAP transfer", c4_fig2},
      {"W-system transfer and return", c5_fig3},
      {"propagation invariants", c6_invariants},
      {"characteristics vs finite differences", c7_characteristics},
      {"shock scaling", c8_shock},
      {"depletion law", c9_depletion},
      {"contour directions", c10_direction},
      {"determinism", c11_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
