#include "adtrans/scenario.hpp"

#include <cmath>

#include "adtrans/errors.hpp"

namespace adtrans {

CVector Scenario::psi0() const {
  CVector v = CVector::Zero(scheme.levels());
  v(initial_level) = 1.0;
  return v;
}

std::vector<double> Scenario::times() const { return grid.sample_times(); }

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.scheme == b.scheme && a.train == b.train &&
         a.detunings == b.detunings && a.initial_level == b.initial_level && a.grid == b.grid &&
         a.regime == b.regime && a.monitor.threshold == b.monitor.threshold &&
         a.monitor.coupling_floor == b.monitor.coupling_floor &&
         a.monitor.gap_resolution == b.monitor.gap_resolution;
}

namespace {

// Pump/Stokes pairs peak 30/T, delay 1.2 T, Delta = 10/T.
Scenario fig2() {
  const LevelScheme scheme = LevelScheme::m_system();
  PulseTrain train{{gaussian(30, 0.6, 1), gaussian(30, -0.6, 1), gaussian(30, 0.6, 1),
                    gaussian(30, -0.6, 1)}};
  return {"fig2_m_stirap", scheme, train, DetuningLadder(scheme, {10, 10, 10, 10}), 0,
          TimeGrid{-6.0, 6.0, 5e-5, 200}, "a", {}};
}

// Long degenerate pulse on 1-2-3; Omega_4 precedes and ends before Omega_3.
Scenario fig3() {
  const LevelScheme scheme = LevelScheme::w_system().with_degeneracy({{0, 1}});
  PulseTrain train{{gaussian(30, 0, 3), gaussian(30, 0, 3), gaussian(30, 0.6, 1),
                    gaussian(30, -0.6, 1)}};
  return {"fig3_w_transfer", scheme, train, DetuningLadder(scheme, {-10, 10, 20, 10}), 1,
          TimeGrid{-12.0, 12.0, 5e-5, 400}, "b", {}};
}

// Omega_4 wider than Omega_3 on both sides, so theta_2 -> 0 at both ends.
Scenario w_return() {
  Scenario s = fig3();
  s.name = "w_return";
  s.train.envelopes[2] = gaussian(15, 0, 0.7);
  s.train.envelopes[3] = gaussian(30, 0, 1.5);
  return s;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"fig2_m_stirap", "fig3_w_transfer", "w_return"};
  return names;
}

Scenario scenario(const std::string& name) {
  if (name == "fig2_m_stirap") return fig2();
  if (name == "fig3_w_transfer") return fig3();
  if (name == "w_return") return w_return();
  throw ContractViolation("unknown scenario '" + name + "'");
}

Scenario with_peak(Scenario s, double peak) {
  for (auto& e : s.train.envelopes) e.peak_rabi = peak;
  return s;
}

}  // namespace adtrans
