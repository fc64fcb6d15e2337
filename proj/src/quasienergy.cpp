#include "adtrans/quasienergy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adtrans/errors.hpp"

namespace adtrans {

int QuasienergyFan::branch_with_label(int k) const {
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] == k) return static_cast<int>(b);
  }
  return -1;
}

void fix_phase(CVector& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    // strict improvement by a relative margin keeps the choice stable under roundoff
    if (a > mag * (1.0 + 1e-12)) {
      mag = a;
      best = i;
    }
  }
  if (mag > 0.0) v *= std::conj(v[best]) / mag;
}

double eigen_residual(const CMatrix& h, const CVector& v) {
  const Complex lambda = v.dot(h * v);
  return (h * v - lambda * v).norm();
}

QuasienergyFan track_branches(std::span<const double> times,
                              const std::vector<kernels::EigenPoint>& points) {
  QuasienergyFan fan;
  if (points.empty()) return fan;
  const auto n = points.front().values.size();
  fan.times.assign(times.begin(), times.end());
  fan.branches.assign(n, std::vector<double>(points.size()));
  fan.eigvecs.assign(n, std::vector<CVector>(points.size()));
  fan.labels.assign(n, -1);

  // slot[b] = column of the current decomposition carrying branch b
  std::vector<Eigen::Index> slot(n);
  for (Eigen::Index b = 0; b < n; ++b) slot[b] = b;

  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto& p = points[j];
    if (j > 0) {
      const auto& prev = points[j - 1];
      Eigen::MatrixXd overlap(n, n);
      for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index c = 0; c < n; ++c) {
          overlap(b, c) = std::abs(prev.vectors.col(slot[b]).dot(p.vectors.col(c)));
        }
      }
      // greedy maximal-overlap matching; ties resolved by index order
      std::vector<Eigen::Index> next(n, -1);
      std::vector<bool> row_used(n, false), col_used(n, false);
      for (Eigen::Index k = 0; k < n; ++k) {
        double best = -1.0;
        Eigen::Index br = 0, bc = 0;
        for (Eigen::Index b = 0; b < n; ++b) {
          if (row_used[b]) continue;
          for (Eigen::Index c = 0; c < n; ++c) {
            if (col_used[c]) continue;
            if (overlap(b, c) > best) {
              best = overlap(b, c);
              br = b;
              bc = c;
            }
          }
        }
        row_used[br] = col_used[bc] = true;
        next[br] = bc;
      }
      slot = next;
    }
    const double scale = std::max(1.0, p.values.cwiseAbs().maxCoeff());
    for (Eigen::Index b = 0; b < n; ++b) {
      fan.branches[b][j] = p.values[slot[b]];
      CVector v = p.vectors.col(slot[b]).cast<Complex>();
      fix_phase(v);
      fan.eigvecs[b][j] = std::move(v);
    }
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double gap = std::abs(fan.branches[a][j] - fan.branches[b][j]);
        if (gap <= kCrossingTolerance * scale) {
          fan.crossings.push_back({j, static_cast<int>(a), static_cast<int>(b), gap});
        }
      }
    }
  }

  // label by the dominant bare component at the first time point
  std::vector<bool> taken(n, false);
  for (Eigen::Index b = 0; b < n; ++b) {
    const CVector& v = fan.eigvecs[b].front();
    Eigen::Index best = -1;
    double mag = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!taken[k] && std::abs(v[k]) > mag) {
        mag = std::abs(v[k]);
        best = k;
      }
    }
    taken[best] = true;
    fan.labels[b] = static_cast<int>(best);
  }
  return fan;
}

QuasienergyFan quasienergy_fan(const LevelScheme& scheme, const PulseTrain& train,
                               const DetuningLadder& detunings, std::span<const double> times,
                               Exec exec) {
  if (times.empty()) throw ContractViolation("quasienergy_fan: empty time grid");
  for (const auto& e : train.envelopes) e.validate();
  const auto points = kernels::eigen_series(exec, scheme, train, detunings.multi_photon(), times);
  return track_branches(times, points);
}

std::vector<Complex> transition_dipoles(const CVector& state) {
  std::vector<Complex> d(state.size() > 0 ? state.size() - 1 : 0);
  for (Eigen::Index i = 0; i + 1 < state.size(); ++i) {
    d[i] = -std::conj(state[i + 1]) * state[i];
  }
  return d;
}

std::vector<Complex> dipole_moments(const LevelScheme& scheme, const HamiltonianSnapshot& h,
                                    const CVector& state) {
  if (state.size() != scheme.levels() || h.matrix.rows() != scheme.levels()) {
    throw ContractViolation("dipole_moments: dimension mismatch");
  }
  const double tol = 1e-8 * std::max(1.0, h.matrix.norm());
  const double res = eigen_residual(h.matrix, state);
  if (!(res <= tol)) {
    throw ContractViolation("dipole_moments: state is not an eigenvector (residual " +
                            std::to_string(res) + ")");
  }
  const auto per_transition = transition_dipoles(state);
  std::vector<Complex> out;
  out.reserve(scheme.groups().size());
  for (const auto& g : scheme.groups()) {
    Complex sum = 0.0;
    for (int i : g) sum += per_transition[i];
    out.push_back(sum);
  }
  return out;
}

}  // namespace adtrans
