#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adtrans/level_scheme.hpp"

namespace adtrans {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// delta_k = sum_{i<=k} s_i Delta_i with s_i = +1 for Up and -1 for Down,
/// delta_0 = 0 prepended. Returns n_levels values.
std::vector<double> multiphoton_detunings(const LevelScheme& scheme,
                                          std::span<const double> one_photon);

/// One-photon detunings together with the multiphoton ladder derived from them.
class DetuningLadder {
 public:
  DetuningLadder(const LevelScheme& scheme, std::vector<double> one_photon);

  const std::vector<double>& one_photon() const { return one_photon_; }
  const std::vector<double>& multi_photon() const { return multi_photon_; }

  friend bool operator==(const DetuningLadder&, const DetuningLadder&) = default;

 private:
  std::vector<double> one_photon_;
  std::vector<double> multi_photon_;
};

struct HamiltonianSnapshot {
  CMatrix matrix;
  double time = 0.0;
};

/// Rotating-frame interaction Hamiltonian: diag(delta_0..delta_{n-1}) with
/// -Omega_i on the (i, i+1) and (i+1, i) entries.
HamiltonianSnapshot build_hamiltonian(const LevelScheme& scheme, std::span<const double> rabi,
                                      const DetuningLadder& detunings, double time = 0.0);

/// Same matrix from raw ladders, no scheme checks beyond sizes.
CMatrix hamiltonian_matrix(std::span<const double> multi_photon, std::span<const double> rabi);
Eigen::MatrixXd real_hamiltonian(std::span<const double> multi_photon,
                                 std::span<const double> rabi);

/// ||H - H^dagger|| relative to ||H||, and largest entry off the tridiagonal band.
double hermiticity_defect(const CMatrix& h);
double band_defect(const CMatrix& h);

}  // namespace adtrans
