#pragma once

#include <span>
#include <vector>

#include "adtrans/hamiltonian.hpp"
#include "adtrans/kernels.hpp"
#include "adtrans/level_scheme.hpp"
#include "adtrans/pulses.hpp"

namespace adtrans {

/// Two branches came closer than the degeneracy tolerance at `time_index`.
struct CrossingEvent {
  std::size_t time_index = 0;
  int branch_a = 0;
  int branch_b = 0;
  double gap = 0.0;
};

/// Continuity-tracked eigenvalue branches of H(t).
///
/// branches[b][j] is the quasienergy of branch b at times[j]; eigvecs holds
/// the matching normalized eigenvector (largest component real positive).
/// labels[b] = k means the branch connects to delta_k with the fields off.
struct QuasienergyFan {
  std::vector<double> times;
  std::vector<std::vector<double>> branches;
  std::vector<std::vector<CVector>> eigvecs;
  std::vector<int> labels;
  std::vector<CrossingEvent> crossings;

  int branch_count() const { return static_cast<int>(branches.size()); }
  /// Branch whose field-off label is delta_k, or -1.
  int branch_with_label(int k) const;
};

/// Multiplies by a unit phase so the largest-magnitude component is real
/// and positive. Ties go to the lowest index.
void fix_phase(CVector& v);

/// Degeneracy tolerance used for crossing detection, relative to ||H||.
inline constexpr double kCrossingTolerance = 1e-9;

QuasienergyFan quasienergy_fan(const LevelScheme& scheme, const PulseTrain& train,
                               const DetuningLadder& detunings, std::span<const double> times,
                               Exec exec = Exec::Parallel);

/// Tracking step on precomputed decompositions (exposed for tests).
QuasienergyFan track_branches(std::span<const double> times,
                              const std::vector<kernels::EigenPoint>& points);

/// d lambda / d Omega_i^* = <psi| dH/dOmega_i^* |psi> = -conj(b_{i+1}) b_i
/// for every transition. For real Rabi frequencies the real derivative is
/// d lambda / d Omega_i = 2 Re(result[i]).
std::vector<Complex> transition_dipoles(const CVector& state);

/// Per-field dipole quantities: the coherent sum of transition_dipoles over
/// each degeneracy group of `scheme` (one entry per group, in group order).
/// Throws ContractViolation when `state` is not an eigenvector of H
/// (residual above 1e-8 max(1, ||H||)).
std::vector<Complex> dipole_moments(const LevelScheme& scheme, const HamiltonianSnapshot& h,
                                    const CVector& state);

/// ||H v - <v|H|v> v||.
double eigen_residual(const CMatrix& h, const CVector& v);

}  // namespace adtrans
