#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adtrans/dynamics.hpp"
#include "adtrans/hamiltonian.hpp"
#include "adtrans/level_scheme.hpp"
#include "adtrans/pulses.hpp"

namespace adtrans {

/// Everything a single-atom run needs.
struct Scenario {
  std::string name;
  LevelScheme scheme = LevelScheme::m_system();
  PulseTrain train;
  DetuningLadder detunings{LevelScheme::m_system(), {0.0, 0.0, 0.0, 0.0}};
  int initial_level = 0;  // 0-based bare state injected at start
  TimeGrid grid;
  std::optional<std::string> regime;
  MonitorOptions monitor;

  CVector psi0() const;
  std::vector<double> times() const;  // stored sample times of evolve()

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Built-in scenarios: "fig2_m_stirap", "fig3_w_transfer", "w_return".
/// Throws ContractViolation for other names.
Scenario scenario(const std::string& name);
const std::vector<std::string>& scenario_names();

/// Same scenario with every peak Rabi frequency scaled to `peak`.
Scenario with_peak(Scenario s, double peak);

}  // namespace adtrans
