#pragma once

#include <cstddef>
#include <vector>

#include "adtrans/hamiltonian.hpp"
#include "adtrans/level_scheme.hpp"
#include "adtrans/pulses.hpp"
#include "adtrans/quasienergy.hpp"

namespace adtrans {

/// Uniform integration grid. Every `stride`-th step is stored.
struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  double step = 1e-3;
  std::size_t stride = 1;

  std::size_t steps() const;
  /// Times evolve() records: every stride-th step and the last.
  std::vector<double> sample_times() const;
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Largest frequency the step must resolve: max(|delta_k|, |Delta_i|, peak Omega).
double max_frequency(const PulseTrain& train, const DetuningLadder& detunings);

/// factor / (max|delta| + 2 max Omega), the latter bounding the spectral radius of H.
double resolving_step(const PulseTrain& train, const DetuningLadder& detunings,
                      double factor = 0.005);

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<CVector> amplitudes;
  std::vector<std::vector<double>> populations;
  std::vector<double> norm_error;
  std::vector<std::vector<double>> rabi;

  /// |<k|psi(end)>|^2 for every bare level.
  std::vector<double> final_populations() const { return populations.back(); }
  /// Largest population of `level` over the run.
  double max_population(int level) const;
  double max_norm_error() const;
};

/// i db/dt = H(t) b with classical RK4 on the grid; no renormalization.
/// Throws ContractViolation for a non-normalized psi0 or a step coarser
/// than 0.02 / max_frequency, IntegrationFailure when |1 - ||b||^2| > 1e-6.
AmplitudeTrajectory evolve(const LevelScheme& scheme, const PulseTrain& train,
                           const DetuningLadder& detunings, const CVector& psi0,
                           const TimeGrid& grid);

inline constexpr double kNonadiabaticRatio = 0.1;

struct MonitorOptions {
  double threshold = kNonadiabaticRatio;
  /// Points whose coupling is below this floor (1/T) are ignored by the
  /// verdict: ratios there are 0/0 limits in the field-free tails.
  double coupling_floor = 1e-2;
  /// Branch pairs closer than this (relative to the largest |lambda|) are
  /// treated as degenerate: their eigenvectors are not resolved numerically.
  double gap_resolution = 1e-6;
};

struct AdiabaticityMonitor {
  std::vector<double> times;
  std::vector<int> occupied;        // branch with the largest overlap with psi
  std::vector<double> min_gap;      // smallest |lambda_a - lambda_b|, resolved or not
  std::vector<double> coupling;     // max_b |<v_b|dv_a/dt>|
  std::vector<double> ratio;        // max_b |<v_b|dH/dt|v_a>| / (lambda_a - lambda_b)^2
  double max_ratio = 0.0;           // over points that pass the coupling floor
  bool adiabatic = true;
};

/// Requires fan.times == trajectory.times. dH/dt comes from centered
/// differences of the Rabi samples stored in the trajectory.
AdiabaticityMonitor adiabaticity_monitor(const QuasienergyFan& fan,
                                         const AmplitudeTrajectory& trajectory,
                                         const MonitorOptions& options = {});

/// Fidelity of the final state with the adiabatic branch that held psi0.
struct FinalReport {
  std::vector<double> bare;  // final populations
  int branch = -1;
  double adiabatic_fidelity = 0.0;
};

FinalReport final_report(const QuasienergyFan& fan, const AmplitudeTrajectory& trajectory);

}  // namespace adtrans
