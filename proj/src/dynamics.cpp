#include "adtrans/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adtrans/errors.hpp"

namespace adtrans {

std::size_t TimeGrid::steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil((stop - start) / step - 1e-9)));
}

std::vector<double> TimeGrid::sample_times() const {
  const std::size_t n = steps();
  const double h = (stop - start) / static_cast<double>(n);
  std::vector<double> t{start};
  for (std::size_t s = 1; s <= n; ++s) {
    if (s % stride == 0 || s == n) t.push_back(s == n ? stop : start + static_cast<double>(s - 1) * h + h);
  }
  return t;
}

double max_frequency(const PulseTrain& train, const DetuningLadder& detunings) {
  double m = max_peak(train);
  for (double d : detunings.multi_photon()) m = std::max(m, std::abs(d));
  for (double d : detunings.one_photon()) m = std::max(m, std::abs(d));
  return m;
}

double resolving_step(const PulseTrain& train, const DetuningLadder& detunings, double factor) {
  double spread = 0.0;
  for (double d : detunings.multi_photon()) spread = std::max(spread, std::abs(d));
  const double m = std::max(spread + 2.0 * max_peak(train), 1e-12);
  return factor / m;
}

double AmplitudeTrajectory::max_population(int level) const {
  double m = 0.0;
  for (const auto& p : populations) m = std::max(m, p.at(level));
  return m;
}

double AmplitudeTrajectory::max_norm_error() const {
  return norm_error.empty() ? 0.0 : *std::max_element(norm_error.begin(), norm_error.end());
}

namespace {

void record(AmplitudeTrajectory& tr, double t, const CVector& b, std::vector<double> rabi) {
  std::vector<double> pop(b.size());
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    pop[i] = std::norm(b[i]);
    norm2 += pop[i];
  }
  tr.times.push_back(t);
  tr.amplitudes.push_back(b);
  tr.populations.push_back(std::move(pop));
  tr.norm_error.push_back(std::abs(norm2 - 1.0));
  tr.rabi.push_back(std::move(rabi));
}

}  // namespace

AmplitudeTrajectory evolve(const LevelScheme& scheme, const PulseTrain& train,
                           const DetuningLadder& detunings, const CVector& psi0,
                           const TimeGrid& grid) {
  const int n = scheme.levels();
  if (psi0.size() != n) throw ContractViolation("evolve: psi0 has the wrong dimension");
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-12) {
    throw ContractViolation("evolve: psi0 must be normalized");
  }
  if (!(grid.step > 0.0) || !(grid.stop > grid.start) || grid.stride == 0) {
    throw ContractViolation("evolve: invalid time grid");
  }
  const double fmax = max_frequency(train, detunings);
  if (grid.step > 0.02 / std::max(fmax, 1e-300)) {
    std::ostringstream msg;
    msg << "evolve: step " << grid.step << " does not resolve max frequency " << fmax
        << " (need step <= " << 0.02 / fmax << ")";
    throw ContractViolation(msg.str());
  }
  if (static_cast<int>(train.envelopes.size()) != scheme.transitions()) {
    throw ContractViolation("evolve: one envelope per transition required");
  }
  for (const auto& e : train.envelopes) e.validate();

  const auto& delta = detunings.multi_photon();
  const std::size_t nsteps = grid.steps();
  const double h = (grid.stop - grid.start) / static_cast<double>(nsteps);
  const Complex mi(0.0, -1.0);
  std::vector<double> rabi(n - 1);

  auto apply = [&](double t, const CVector& b, CVector& out) {
    sample_pulses(scheme, train, t, rabi);
    for (int i = 0; i < n; ++i) {
      Complex acc = delta[i] * b[i];
      if (i > 0) acc -= rabi[i - 1] * b[i - 1];
      if (i + 1 < n) acc -= rabi[i] * b[i + 1];
      out[i] = mi * acc;
    }
  };

  AmplitudeTrajectory tr;
  CVector b = psi0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  record(tr, grid.start, b, sample_pulses(scheme, train, grid.start));
  for (std::size_t s = 0; s < nsteps; ++s) {
    const double t = grid.start + static_cast<double>(s) * h;
    apply(t, b, k1);
    tmp = b + 0.5 * h * k1;
    apply(t + 0.5 * h, tmp, k2);
    tmp = b + 0.5 * h * k2;
    apply(t + 0.5 * h, tmp, k3);
    tmp = b + h * k3;
    apply(t + h, tmp, k4);
    b += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(b.squaredNorm() - 1.0);
    if (drift > 1e-6) {
      std::ostringstream msg;
      msg << "evolve: norm drift " << drift << " at t = " << t + h
          << "; reduce the time step (currently " << h << ")";
      throw IntegrationFailure(msg.str());
    }
    if ((s + 1) % grid.stride == 0 || s + 1 == nsteps) {
      const double tn = s + 1 == nsteps ? grid.stop : t + h;
      record(tr, tn, b, sample_pulses(scheme, train, tn));
    }
  }
  return tr;
}

AdiabaticityMonitor adiabaticity_monitor(const QuasienergyFan& fan,
                                         const AmplitudeTrajectory& trajectory,
                                         const MonitorOptions& options) {
  if (fan.times != trajectory.times) {
    throw ContractViolation("adiabaticity_monitor: fan and trajectory use different grids");
  }
  const std::size_t nt = fan.times.size();
  const int nb = fan.branch_count();
  AdiabaticityMonitor mon;
  mon.times = fan.times;
  mon.occupied.resize(nt);
  mon.min_gap.resize(nt);
  mon.coupling.assign(nt, 0.0);
  mon.ratio.assign(nt, 0.0);

  // dH/dt only moves the off-diagonal -Omega_i entries
  const int nr = nb - 1;
  auto rabi_rate = [&](std::size_t j, int i) {
    const std::size_t lo = j == 0 ? 0 : j - 1;
    const std::size_t hi = j + 1 == nt ? j : j + 1;
    return (trajectory.rabi[hi][i] - trajectory.rabi[lo][i]) / (fan.times[hi] - fan.times[lo]);
  };

  double scale = 0.0;
  for (const auto& br : fan.branches) {
    for (double l : br) scale = std::max(scale, std::abs(l));
  }
  const double tiny = 1e-14 * std::max(scale, 1.0);
  const double unresolved = options.gap_resolution * std::max(scale, 1.0);

  for (std::size_t j = 0; j < nt; ++j) {
    const CVector& psi = trajectory.amplitudes[j];
    int a = 0;
    double best = -1.0;
    for (int b = 0; b < nb; ++b) {
      const double ov = std::abs(fan.eigvecs[b][j].dot(psi));
      if (ov > best) {
        best = ov;
        a = b;
      }
    }
    mon.occupied[j] = a;
    double gap = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb; ++b) {
      if (b != a) gap = std::min(gap, std::abs(fan.branches[a][j] - fan.branches[b][j]));
    }
    mon.min_gap[j] = gap;
    if (nt < 2) continue;

    std::vector<double> rate(nr);
    for (int i = 0; i < nr; ++i) rate[i] = rabi_rate(j, i);
    const CVector& va = fan.eigvecs[a][j];
    for (int b = 0; b < nb; ++b) {
      if (b == a) continue;
      const CVector& vb = fan.eigvecs[b][j];
      Complex hba = 0.0;
      for (int i = 0; i < nr; ++i) {
        hba -= rate[i] * (std::conj(vb[i]) * va[i + 1] + std::conj(vb[i + 1]) * va[i]);
      }
      const double num = std::abs(hba);
      const double d = std::abs(fan.branches[a][j] - fan.branches[b][j]);
      if (num <= tiny || d <= unresolved) continue;
      const double c = d > 0.0 ? num / d : std::numeric_limits<double>::infinity();
      const double r = d > 0.0 ? num / (d * d) : std::numeric_limits<double>::infinity();
      mon.coupling[j] = std::max(mon.coupling[j], c);
      mon.ratio[j] = std::max(mon.ratio[j], r);
    }
    if (mon.coupling[j] >= options.coupling_floor) {
      mon.max_ratio = std::max(mon.max_ratio, mon.ratio[j]);
    }
  }
  mon.adiabatic = !(mon.max_ratio > options.threshold);
  return mon;
}

FinalReport final_report(const QuasienergyFan& fan, const AmplitudeTrajectory& trajectory) {
  FinalReport rep;
  rep.bare = trajectory.final_populations();
  const CVector& psi0 = trajectory.amplitudes.front();
  double best = -1.0;
  for (int b = 0; b < fan.branch_count(); ++b) {
    const double ov = std::abs(fan.eigvecs[b].front().dot(psi0));
    if (ov > best) {
      best = ov;
      rep.branch = b;
    }
  }
  if (rep.branch >= 0) {
    rep.adiabatic_fidelity =
        std::norm(fan.eigvecs[rep.branch].back().dot(trajectory.amplitudes.back()));
  }
  return rep;
}

}  // namespace adtrans
