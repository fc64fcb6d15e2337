#include "adtrans/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "adtrans/errors.hpp"

namespace adtrans {

std::vector<double> multiphoton_detunings(const LevelScheme& scheme,
                                          std::span<const double> one_photon) {
  const int nt = scheme.transitions();
  if (static_cast<int>(one_photon.size()) != nt) {
    throw ContractViolation("expected " + std::to_string(nt) + " one-photon detunings, got " +
                            std::to_string(one_photon.size()));
  }
  std::vector<double> delta(nt + 1, 0.0);
  for (int i = 0; i < nt; ++i) {
    const double s = scheme.orientation()[i] == Orientation::Up ? 1.0 : -1.0;
    delta[i + 1] = delta[i] + s * one_photon[i];
  }
  return delta;
}

DetuningLadder::DetuningLadder(const LevelScheme& scheme, std::vector<double> one_photon)
    : one_photon_(std::move(one_photon)),
      multi_photon_(multiphoton_detunings(scheme, one_photon_)) {}

CMatrix hamiltonian_matrix(std::span<const double> multi_photon, std::span<const double> rabi) {
  return real_hamiltonian(multi_photon, rabi).cast<Complex>();
}

Eigen::MatrixXd real_hamiltonian(std::span<const double> multi_photon,
                                 std::span<const double> rabi) {
  const auto n = static_cast<Eigen::Index>(multi_photon.size());
  if (static_cast<Eigen::Index>(rabi.size()) != n - 1) {
    throw ContractViolation("need n-1 Rabi frequencies for n levels");
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = multi_photon[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = -rabi[i];
    h(i + 1, i) = -rabi[i];
  }
  return h;
}

HamiltonianSnapshot build_hamiltonian(const LevelScheme& scheme, std::span<const double> rabi,
                                      const DetuningLadder& detunings, double time) {
  if (static_cast<int>(rabi.size()) != scheme.transitions()) {
    throw ContractViolation("expected " + std::to_string(scheme.transitions()) +
                            " Rabi frequencies, got " + std::to_string(rabi.size()));
  }
  if (static_cast<int>(detunings.multi_photon().size()) != scheme.levels()) {
    throw ContractViolation("detuning ladder does not match the level scheme");
  }
  for (std::size_t i = 0; i < rabi.size(); ++i) {
    if (!(rabi[i] >= 0.0) || !std::isfinite(rabi[i])) {
      throw ContractViolation("Rabi frequency " + std::to_string(i + 1) +
                              " must be finite and >= 0, got " + std::to_string(rabi[i]));
    }
  }
  return {hamiltonian_matrix(detunings.multi_photon(), rabi), time};
}

double hermiticity_defect(const CMatrix& h) {
  const double norm = h.norm();
  const double d = (h - h.adjoint()).norm();
  return norm > 0 ? d / norm : d;
}

double band_defect(const CMatrix& h) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (std::abs(r - c) > 1) worst = std::max(worst, std::abs(h(r, c)));
    }
  }
  return worst;
}

}  // namespace adtrans
