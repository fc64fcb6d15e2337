#include "adtrans/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "adtrans/errors.hpp"
#include "adtrans/hamiltonian.hpp"

namespace adtrans {

void MediumParams::validate(int transitions) const {
  if (static_cast<int>(q.size()) != transitions) {
    throw ContractViolation("medium: need one q per transition");
  }
  for (double v : q) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ContractViolation("medium: q must be > 0");
  }
  if (alpha0.has_value() != linewidth.has_value()) {
    throw ContractViolation("medium: alpha0 and linewidth go together");
  }
  if (alpha0) {
    for (double v : q) {
      if (std::abs(*alpha0 * *linewidth - v) > 1e-12 * v) {
        throw ContractViolation("medium: alpha0 * linewidth must equal q");
      }
    }
  }
  if (!(c > 0.0)) throw ContractViolation("medium: c must be > 0");
}

MediumParams MediumParams::uniform(int transitions, double q) {
  MediumParams m;
  m.q.assign(transitions, q);
  return m;
}

std::vector<double> PropagationGrid::tau() const {
  const auto n = static_cast<std::size_t>(std::llround((tau_stop - tau_start) / dtau)) + 1;
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = tau_start + static_cast<double>(j) * dtau;
  t.back() = tau_stop;
  return t;
}

int PropagationGrid::x_steps() const {
  return std::max(1, static_cast<int>(std::ceil(length / dx - 1e-9)));
}

void PropagationGrid::validate() const {
  if (!(length >= 0.0) || !(dx > 0.0)) throw ContractViolation("grid: need length >= 0, dx > 0");
  if (!(tau_stop > tau_start) || !(dtau > 0.0)) throw ContractViolation("grid: bad tau range");
  if ((tau_stop - tau_start) / dtau < 4.0) throw ContractViolation("grid: need at least 5 tau points");
  if (store_every < 1) throw ContractViolation("grid: store_every must be >= 1");
}

std::vector<double> closure_populations(const RegimeSpec& closure, const std::vector<double>& rabi,
                                        const std::vector<double>& multi_photon) {
  const Eigen::VectorXd b = closed_form_vector(closure.closed_form, rabi, multi_photon);
  const double r2 = b.squaredNorm();
  std::vector<double> p(b.size(), 0.0);
  if (r2 > 1e-280) {
    for (Eigen::Index i = 0; i < b.size(); ++i) p[i] = b[i] * b[i] / r2;
    return p;
  }
  // 0/0 limit of the closed form: keep the level the regime ends in
  if (closure.closed_form == ClosedForm::WShared) {
    p[4] = 1.0;
  } else {
    p[closure.required_initial_state] = 1.0;
  }
  return p;
}

namespace {

struct ReducedModel {
  const LevelScheme& scheme;
  const MediumParams& medium;
  const RegimeSpec& closure;
  int nt;   // tau points
  int ng;   // fields
  int ntr;  // transitions
  double h; // dtau
  std::vector<double> sign;

  // u is interleaved: u[j * ng + g]; `ug` points at the ng values of one tau point
  std::vector<double> rabi_at(const double* ug) const {
    std::vector<double> r(ntr);
    for (int i = 0; i < ntr; ++i) r[i] = std::sqrt(std::max(ug[scheme.group_of(i)], 0.0));
    return r;
  }

  double extension_step = 0.0;

  void cumulative_raw(const double* ug, const std::vector<double>& multi, double* out) const {
    const auto p = closure_populations(closure, rabi_at(ug), multi);
    double acc = 0.0;
    for (int k = 0; k < ntr; ++k) {
      acc += p[k];
      out[k] = acc;
    }
  }

  // cumulative populations P_k for k = 0..ntr-1 at one tau point; slightly
  // negative intensities get the linear extension from 0 so Newton sees a
  // differentiable map
  void cumulative(const double* ug, const std::vector<double>& multi, double* out) const {
    bool negative = false;
    for (int g = 0; g < ng; ++g) negative = negative || ug[g] < 0.0;
    if (!negative) {
      cumulative_raw(ug, multi, out);
      return;
    }
    std::vector<double> w(ug, ug + ng), probe(ntr);
    for (double& x : w) x = std::max(x, 0.0);
    cumulative_raw(w.data(), multi, out);
    const std::vector<double> base(out, out + ntr);
    for (int g = 0; g < ng; ++g) {
      if (ug[g] >= 0.0) continue;
      std::vector<double> wp = w;
      wp[g] = extension_step;
      cumulative_raw(wp.data(), multi, probe.data());
      for (int k = 0; k < ntr; ++k) out[k] += ug[g] * (probe[k] - base[k]) / extension_step;
    }
  }

  // tau derivative taps at node j for group g; +1 takes values travelling
  // toward later tau (backward-biased), -1 the reverse, 0 centered
  std::vector<int> direction;

  int taps(int j, int g, int* jp, double* c) const {
    const int dir = direction[g];
    if (dir > 0) {
      if (j == 0) return 0;
      if (j == 1) {
        jp[0] = 0, c[0] = -1.0 / h, jp[1] = 1, c[1] = 1.0 / h;
        return 2;
      }
      jp[0] = j - 2, c[0] = 0.5 / h, jp[1] = j - 1, c[1] = -2.0 / h, jp[2] = j, c[2] = 1.5 / h;
      return 3;
    }
    if (dir < 0) {
      if (j == nt - 1) return 0;
      if (j == nt - 2) {
        jp[0] = j, c[0] = -1.0 / h, jp[1] = j + 1, c[1] = 1.0 / h;
        return 2;
      }
      jp[0] = j, c[0] = -1.5 / h, jp[1] = j + 1, c[1] = 2.0 / h, jp[2] = j + 2, c[2] = -0.5 / h;
      return 3;
    }
    if (j == 0) {
      jp[0] = 0, c[0] = -1.0 / h, jp[1] = 1, c[1] = 1.0 / h;
    } else if (j == nt - 1) {
      jp[0] = j - 1, c[0] = -1.0 / h, jp[1] = j, c[1] = 1.0 / h;
    } else {
      jp[0] = j - 1, c[0] = -0.5 / h, jp[1] = j + 1, c[1] = 0.5 / h;
    }
    return 2;
  }
};

}  // namespace

FieldGrid propagate_reduced(const LevelScheme& scheme, const EntranceFields& entrance,
                            const MediumParams& medium, const RegimeSpec& closure,
                            const PropagationGrid& grid, const ReducedOptions& options) {
  grid.validate();
  const int ntr = scheme.transitions();
  medium.validate(ntr);
  if (closure.closed_form == ClosedForm::None || closure.levels() != scheme.levels()) {
    throw ContractViolation("propagate_reduced: closure regime needs a closed-form state "
                            "on the same number of levels");
  }
  if (static_cast<int>(entrance.omega_sq.size()) != ntr ||
      static_cast<int>(entrance.delta.size()) != ntr) {
    throw ContractViolation("propagate_reduced: need one entrance profile per transition");
  }

  const auto tau = grid.tau();
  const int nt = static_cast<int>(tau.size());
  const int ng = static_cast<int>(scheme.groups().size());
  ReducedModel m{scheme, medium, closure, nt, ng, ntr, grid.dtau, {}, 0.0, {}};
  for (auto o : scheme.orientation()) m.sign.push_back(o == Orientation::Up ? 1.0 : -1.0);

  Eigen::VectorXd u(nt * ng);
  std::vector<std::vector<double>> one(ntr, std::vector<double>(nt));
  for (int j = 0; j < nt; ++j) {
    for (int g = 0; g < ng; ++g) {
      const double v = entrance.omega_sq[scheme.groups()[g].front()](tau[j]);
      if (!(v >= 0.0)) throw ContractViolation("propagate_reduced: negative entrance intensity");
      u[j * ng + g] = v;
    }
    for (int i = 0; i < ntr; ++i) one[i][j] = entrance.delta[scheme.group_leader(i)](tau[j]);
  }
  const double umax = std::max(u.cwiseAbs().maxCoeff(), 1e-300);
  m.extension_step = 1e-10 * umax;

  // where a pair's summed intensity is negligible its mixing angle is
  // undefined; both members keep their entrance values there
  std::vector<char> frozen(static_cast<std::size_t>(nt) * ng, 0);
  for (auto [a, b] : options.invariant_pairs) {
    const int ga = scheme.group_of(a), gb = scheme.group_of(b);
    double peak = 0.0;
    for (int j = 0; j < nt; ++j) peak = std::max(peak, u[j * ng + ga] + u[j * ng + gb]);
    for (int j = 0; j < nt; ++j) {
      if (u[j * ng + ga] + u[j * ng + gb] <= options.freeze_below * peak) {
        frozen[j * ng + ga] = frozen[j * ng + gb] = 1;
      }
    }
  }

  std::vector<std::vector<double>> multi(nt);
  auto refresh_multi = [&]() {
    std::vector<double> d(ntr);
    for (int j = 0; j < nt; ++j) {
      for (int i = 0; i < ntr; ++i) d[i] = one[i][j];
      multi[j] = multiphoton_detunings(scheme, d);
    }
  };
  refresh_multi();

  // F(u): right-hand sides, interleaved like u
  std::vector<double> pcum(static_cast<std::size_t>(nt) * ntr);
  auto populate = [&](const Eigen::VectorXd& v) {
    kernels::for_each_index(options.exec, nt, [&](std::size_t j) {
      m.cumulative(v.data() + j * ng, multi[j], &pcum[j * ntr]);
    });
  };
  auto rhs = [&](const Eigen::VectorXd& v) {
    populate(v);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nt * ng);
    int jp[3];
    double c[3];
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < ntr; ++k) {
        const int g = scheme.group_of(k);
        const int n = m.taps(j, g, jp, c);
        double d = 0.0;
        for (int t = 0; t < n; ++t) d += c[t] * pcum[jp[t] * ntr + k];
        if (!frozen[j * ng + g]) f[j * ng + g] += m.sign[k] * medium.q[k] * d;
      }
    }
    return f;
  };

  // d P_k(j) / d u_g(j), stored [j][k * ng + g]
  std::vector<double> dp(static_cast<std::size_t>(nt) * ntr * ng);
  auto jacobian_blocks = [&](const Eigen::VectorXd& v) {
    kernels::for_each_index(options.exec, nt, [&](std::size_t js) {
      const int j = static_cast<int>(js);
      std::vector<double> w(v.data() + j * ng, v.data() + (j + 1) * ng);
      std::vector<double> plus(ntr), minus(ntr);
      for (int g = 0; g < ng; ++g) {
        const double base = w[g];
        const double eps = 1e-7 * std::max(std::abs(base), 1e-12 * umax);
        const double lo = base - eps, hi = base + eps;
        w[g] = hi;
        m.cumulative(w.data(), multi[j], plus.data());
        w[g] = lo;
        m.cumulative(w.data(), multi[j], minus.data());
        w[g] = base;
        for (int k = 0; k < ntr; ++k) {
          dp[(js * ntr + k) * ng + g] = (plus[k] - minus[k]) / (hi - lo);
        }
      }
    });
  };

  // travel direction of each field from the linearized speed
  //   c_g = -sum_{k in g} s_k q_k dP_k/du_g  averaged where the field is on
  m.direction.assign(ng, 0);
  if (!options.tau_direction.empty()) {
    if (static_cast<int>(options.tau_direction.size()) != ng) {
      throw ContractViolation("propagate_reduced: tau_direction needs one entry per field");
    }
    m.direction = options.tau_direction;
  } else {
    jacobian_blocks(u);
    for (int g = 0; g < ng; ++g) {
      double speed = 0.0;
      for (int j = 0; j < nt; ++j) {
        if (u[j * ng + g] < 1e-3 * umax) continue;
        for (int k : scheme.groups()[g]) {
          speed -= m.sign[k] * medium.q[k] * dp[(static_cast<std::size_t>(j) * ntr + k) * ng + g];
        }
      }
      m.direction[g] = speed > 0.0 ? 1 : (speed < 0.0 ? -1 : 0);
    }
  }

  FieldGrid out;
  out.kind = closure.closed_form == ClosedForm::WShared ? "reduced-W" : "reduced-M";
  out.tau = tau;
  out.omega_sq.assign(ntr, {});
  out.delta.assign(ntr, {});

  std::vector<double> theta(nt), phi(nt), dtheta(nt);
  auto angles = [&](const Eigen::VectorXd& v) {
    for (int j = 0; j < nt; ++j) {
      const auto r = m.rabi_at(v.data() + j * ng);
      if (closure.closed_form == ClosedForm::WShared) {
        theta[j] = std::atan2(r[2], r[3]);
        const double d1 = multi[j][1];
        phi[j] = d1 == 0.0 ? std::numbers::pi / 2 : std::atan(std::sqrt(2.0) * r[0] / d1);
      } else if (ntr >= 2) {
        theta[j] = std::atan2(r[0], r[1]);
      }
    }
    kernels::centered_gradient(options.exec, theta, m.h, dtheta);
    double mx = 0.0;
    for (double d : dtheta) mx = std::max(mx, std::abs(d));
    return mx;
  };

  std::vector<std::vector<double>> invariant0;
  for (auto [a, b] : options.invariant_pairs) {
    std::vector<double> s(nt);
    for (int j = 0; j < nt; ++j) s[j] = u[j * ng + scheme.group_of(a)] + u[j * ng + scheme.group_of(b)];
    invariant0.push_back(std::move(s));
  }
  const auto one0 = one;

  double entrance_dtheta = 0.0;
  auto store = [&](double x) {
    const double mx = angles(u);
    if (out.x.empty()) entrance_dtheta = mx;
    out.x.push_back(x);
    for (int i = 0; i < ntr; ++i) {
      std::vector<double> row(nt);
      for (int j = 0; j < nt; ++j) row[j] = u[j * ng + scheme.group_of(i)];
      out.omega_sq[i].push_back(std::move(row));
      out.delta[i].push_back(one[i]);
    }
    out.theta.push_back(theta);
    if (closure.closed_form == ClosedForm::WShared) out.phi.push_back(phi);

    double drift = 0.0;
    for (std::size_t p = 0; p < invariant0.size(); ++p) {
      const auto [a, b] = options.invariant_pairs[p];
      const double scale = std::max(*std::max_element(invariant0[p].begin(), invariant0[p].end()), 1e-300);
      for (int j = 0; j < nt; ++j) {
        const double now = u[j * ng + scheme.group_of(a)] + u[j * ng + scheme.group_of(b)];
        drift = std::max(drift, std::abs(now - invariant0[p][j]) / scale);
      }
    }
    double ddrift = 0.0;
    for (int i = 0; i < ntr; ++i) {
      for (int j = 0; j < nt; ++j) ddrift = std::max(ddrift, std::abs(one[i][j] - one0[i][j]));
    }
    out.diagnostics.x.push_back(x);
    out.diagnostics.invariant_drift.push_back(drift);
    out.diagnostics.max_dtheta.push_back(mx);
    out.diagnostics.detuning_drift.push_back(ddrift);
    return mx;
  };

  // detuning right-hand sides, one per transition
  auto detuning_rhs = [&](const Eigen::VectorXd& v) {
    std::vector<std::vector<double>> w(ng, std::vector<double>(nt, 0.0));
    for (int j = 0; j < nt; ++j) {
      const auto r = m.rabi_at(v.data() + j * ng);
      const Eigen::VectorXd b = closed_form_vector(closure.closed_form, r, multi[j]);
      const double r2 = b.squaredNorm();
      for (int k = 0; k < ntr; ++k) {
        const double c = r2 > 1e-280 ? b[k] * b[k + 1] / r2 : 0.0;
        if (c != 0.0 && r[k] > 0.0) w[scheme.group_of(k)][j] += medium.q[k] * c / r[k];
      }
    }
    std::vector<std::vector<double>> g(ntr, std::vector<double>(nt));
    std::vector<double> d(nt);
    for (int gi = 0; gi < ng; ++gi) {
      kernels::centered_gradient(options.exec, w[gi], m.h, d);
      for (int k : scheme.groups()[gi]) g[k] = d;
    }
    return g;
  };

  store(0.0);
  const int steps = grid.x_steps();
  const double dx = grid.length / steps;

  using Sparse = Eigen::SparseMatrix<double>;
  Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;

  // one trapezoidal step of length hx from u; false when Newton fails
  auto advance = [&](double hx, Eigen::VectorXd& v) {
    const Eigen::VectorXd f0 = rhs(u);
    v = u;
    int jp[3];
    double cf[3];
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.newton_max_iter; ++it) {
      const Eigen::VectorXd f = rhs(v);
      const Eigen::VectorXd res = v - u - 0.5 * hx * (f0 + f);
      const double r = res.cwiseAbs().maxCoeff();
      if (r <= options.newton_tol * umax) return true;
      // stalled at the round-off floor of the closure near vanishing fields
      if (r <= options.newton_floor * umax && r > 0.5 * prev) return true;
      prev = r;
      jacobian_blocks(v);
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(nt) * ng * (3 * ng + 1));
      for (int j = 0; j < nt; ++j) {
        for (int gi = 0; gi < ng; ++gi) trip.emplace_back(j * ng + gi, j * ng + gi, 1.0);
        for (int k = 0; k < ntr; ++k) {
          const int row = j * ng + scheme.group_of(k);
          if (frozen[row]) continue;
          const int n = m.taps(j, scheme.group_of(k), jp, cf);
          for (int t = 0; t < n; ++t) {
            for (int gh = 0; gh < ng; ++gh) {
              const double val = -0.5 * hx * m.sign[k] * medium.q[k] * cf[t] *
                                 dp[(static_cast<std::size_t>(jp[t]) * ntr + k) * ng + gh];
              if (val != 0.0) trip.emplace_back(row, jp[t] * ng + gh, val);
            }
          }
        }
      }
      Sparse a(nt * ng, nt * ng);
      a.setFromTriplets(trip.begin(), trip.end());
      a.makeCompressed();
      if (!analyzed) {
        lu.analyzePattern(a);
        analyzed = true;
      }
      lu.factorize(a);
      if (lu.info() != Eigen::Success) return false;
      v += lu.solve(-res);
      for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (frozen[k]) v[k] = u[k];
      }
      if (!v.allFinite()) return false;
    }
    return false;
  };

  Eigen::VectorXd v;
  for (int s = 1; s <= steps && grid.length > 0.0; ++s) {
    // halve the step until Newton converges
    double done = 0.0;
    int level = 0;
    while (done < dx * (1.0 - 1e-12)) {
      const double hx = std::min(dx / static_cast<double>(1 << level), dx - done);
      const auto g0 = detuning_rhs(u);
      const bool ok = advance(hx, v);
      Eigen::Index worst = 0;
      const bool negative = ok && v.minCoeff(&worst) < -options.negative_tolerance * umax;
      if (!ok || negative) {
        if (++level > options.max_halvings) {
          std::ostringstream msg;
          const double at = (s - 1) * dx + done;
          if (negative) {
            msg << "propagate_reduced: squared field went negative (" << v[worst] << ") at x = "
                << at + hx << ", tau = " << tau[worst / ng] << "; reduce dx";
          } else {
            msg << "propagate_reduced: Newton did not converge at x = " << at << " even with step "
                << hx << "; reduce dx";
          }
          throw IntegrationFailure(msg.str());
        }
        continue;
      }
      u = v;
      const auto g1 = detuning_rhs(u);
      bool moved = false;
      for (int i = 0; i < ntr; ++i) {
        for (int j = 0; j < nt; ++j) {
          const double inc = 0.5 * hx * (g0[i][j] + g1[i][j]);
          if (inc != 0.0) {
            one[i][j] += inc;
            moved = true;
          }
        }
      }
      if (moved) refresh_multi();
      done += hx;
    }

    const bool last = s == steps;
    const bool shocked = !out.shock && angles(u) > options.shock_factor * entrance_dtheta;
    if (shocked || s % grid.store_every == 0 || last) store(s * dx);
    if (shocked) {
      out.shock = true;
      out.shock_x = s * dx;
      out.truncated = !last;
      break;
    }
  }
  return out;
}

std::map<std::string, LengthScale> adiabaticity_lengths(const std::string& kind,
                                                        const LengthParams& p) {
  if (!(p.q > 0.0)) throw ContractViolation("adiabaticity_lengths: q must be > 0");
  std::map<std::string, LengthScale> out;
  if (kind == "M" || kind == "m") {
    out["L_adiab_M"] = {p.omega0_sq * p.T / (3.0 * p.q), "3 q x / (Omega0^2 T) << 1"};
    out["L_shock_M"] = {p.omega0_sq * p.T / (p.q * kMTransportFMax),
                        "q x f_max / (Omega0^2 T) = 1"};
  } else if (kind == "W" || kind == "w") {
    out["L_disp_W"] = {p.delta1 * p.delta1 * p.T / p.q, "q x T / (delta1 T)^2 << 1"};
    out["L_mix_W"] = {p.omega0_sq * p.T1 / p.q, "q x T1 / (Omega0 T1)^2 << 1"};
    const double d2 = p.delta1 * p.delta1;
    out["L_shock_W"] = {d2 * d2 * p.T1 / (4.0 * p.q * p.omega01_sq),
                        "4 q x Omega1^2 / (delta1^4 T1) = 1"};
    out["L_deplete"] = {p.W0 / p.q1, "q1 x = W0"};
  } else {
    throw ContractViolation("adiabaticity_lengths: kind must be M or W");
  }
  return out;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return {0.0, n == 1 ? y[0] : 0.0};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  const double slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  return {slope, (sy - slope * sx) / n};
}

EnergyAudit energy_audit(const FieldGrid& grid) {
  EnergyAudit a;
  a.x = grid.x;
  const auto& tau = grid.tau;
  for (std::size_t i = 0; i < grid.omega_sq.size(); ++i) {
    std::vector<double> w;
    double peak = 0.0, edge = 0.0;
    for (const auto& row : grid.omega_sq[i]) {
      double s = 0.0;
      for (std::size_t j = 1; j < row.size(); ++j) s += 0.5 * (row[j] + row[j - 1]) * (tau[j] - tau[j - 1]);
      w.push_back(s);
      peak = std::max(peak, *std::max_element(row.begin(), row.end()));
      edge = std::max({edge, row.front(), row.back()});
    }
    if (peak > 0.0 && edge > 1e-6 * peak) {
      std::ostringstream msg;
      msg << "field " << i + 1 << ": pulse support truncated by the tau grid (edge value "
          << edge / peak << " of peak, tail energy ~ " << edge * (tau[1] - tau[0]) << ")";
      a.warnings.push_back(msg.str());
    }
    a.slope.push_back(fit_line(a.x, w).first);
    a.W.push_back(std::move(w));
  }
  return a;
}

double crossing_time(const std::vector<double>& tau, const std::vector<double>& row, double level) {
  for (std::size_t j = 1; j < row.size(); ++j) {
    const double a = row[j - 1] - level, b = row[j] - level;
    if (a == 0.0) return tau[j - 1];
    if ((a < 0.0) != (b < 0.0)) return tau[j - 1] + (tau[j] - tau[j - 1]) * a / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace adtrans
