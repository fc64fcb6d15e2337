#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "adtrans/errors.hpp"
#include "adtrans/propagation.hpp"

namespace adtrans {

double m_transport_f(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double p = c * c * s * s;
  return (1.0 + 2.0 * p) / ((1.0 - p) * (1.0 - p));
}

namespace {

/// Cumulative integral of a profile on a refined table with inverse lookup.
class EnergyCoordinate {
 public:
  EnergyCoordinate(const Profile& density, double t0, double t1, std::size_t intervals) {
    const std::size_t n = intervals;
    const double h = (t1 - t0) / static_cast<double>(n);
    tau_.resize(n + 1);
    s_.resize(n + 1);
    s_[0] = 0.0;
    double prev = density(t0);
    tau_[0] = t0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double a = t0 + (i - 1) * h, b = t0 + i * h;
      const double mid = density(0.5 * (a + b)), next = density(b);
      s_[i] = s_[i - 1] + h * (prev + 4.0 * mid + next) / 6.0;
      tau_[i] = b;
      prev = next;
    }
    tau_.back() = t1;
  }

  double total() const { return s_.back(); }

  double s_of(double t) const { return interp(tau_, s_, t); }
  double tau_of(double s) const { return interp(s_, tau_, s); }

 private:
  static double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - w) * ys[i - 1] + w * ys[i];
  }

  std::vector<double> tau_;
  std::vector<double> s_;
};

double interp_uniform(const std::vector<double>& y, double x0, double h, double x) {
  const double u = (x - x0) / h;
  if (u <= 0.0) return y.front();
  const auto last = static_cast<double>(y.size() - 1);
  if (u >= last) return y.back();
  const auto i = static_cast<std::size_t>(u);
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * y[i] + w * y[i + 1];
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double m_characteristic(const Profile& theta0, const Profile& cumulative, double q, double x,
                        double tau, double tau_start) {
  if (x <= 0.0) return theta0(tau);
  const double s_tau = cumulative(tau);
  auto g = [&](double tp) { return s_tau - cumulative(tp) - q * x * m_transport_f(theta0(tp)); };
  // nearest sign change below tau, then bisection
  constexpr int kScan = 400;
  const double span = tau - tau_start;
  double hi = tau, ghi = g(hi);
  for (int k = 1; k <= kScan; ++k) {
    const double lo = tau - span * k / kScan;
    const double glo = g(lo);
    if (glo >= 0.0) {
      double a = lo, b = hi;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        if (g(mid) >= 0.0) a = mid; else b = mid;
      }
      return theta0(0.5 * (a + b));
    }
    hi = lo;
    ghi = glo;
  }
  (void)ghi;
  return theta0(tau_start);
}

FieldGrid m_system_transport(const Profile& theta0, const Profile& omega0_sq, double q,
                             const PropagationGrid& grid, const TransportOptions& options) {
  grid.validate();
  if (!(q > 0.0)) throw ContractViolation("m_system_transport: q must be > 0");
  const auto tau = grid.tau();
  const std::size_t nt = tau.size();
  for (double t : tau) {
    const double th = theta0(t);
    if (th < -1e-12 || th > std::numbers::pi / 2 + 1e-12) {
      throw ContractViolation("m_system_transport: entrance angle outside [0, pi/2]");
    }
    if (!(omega0_sq(t) > 0.0)) {
      throw ContractViolation("m_system_transport: Omega0^2 must be > 0 on the grid");
    }
  }

  const EnergyCoordinate energy(omega0_sq, grid.tau_start, grid.tau_stop, 16 * (nt - 1));
  const std::size_t ns = options.energy_points > 0 ? options.energy_points : nt;
  const double ds = energy.total() / static_cast<double>(ns - 1);
  std::vector<double> s_node(ns), theta(ns), dens(ns), speed(ns, 1.0), grad(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    s_node[k] = k * ds;
    const double t = energy.tau_of(s_node[k]);
    theta[k] = theta0(t);
    dens[k] = omega0_sq(t);
  }
  std::vector<double> s_tau(nt);
  for (std::size_t j = 0; j < nt; ++j) s_tau[j] = energy.s_of(tau[j]);
  const Profile cumulative = [&energy](double t) { return energy.s_of(t); };

  auto indicator = [&](const std::vector<double>& th) {
    kernels::centered_gradient(options.exec, th, ds, grad);
    double m = 0.0;
    for (std::size_t k = 0; k < ns; ++k) m = std::max(m, dens[k] * std::abs(grad[k]));
    return m;
  };

  FieldGrid out;
  out.kind = "transport-M";
  out.tau = tau;
  out.omega_sq.assign(4, {});
  auto store = [&](double x, double dtheta_max) {
    std::vector<double> row(nt), w1(nt), w2(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      row[j] = interp_uniform(theta, 0.0, ds, s_tau[j]);
      const double o = omega0_sq(tau[j]);
      w1[j] = o * std::sin(row[j]) * std::sin(row[j]);
      w2[j] = o * std::cos(row[j]) * std::cos(row[j]);
    }
    out.x.push_back(x);
    out.theta.push_back(row);
    out.omega_sq[0].push_back(w1);
    out.omega_sq[1].push_back(w2);
    out.omega_sq[2].push_back(w1);
    out.omega_sq[3].push_back(w2);
    if (options.with_characteristics) {
      std::vector<double> ch(nt);
      kernels::for_each_index(options.exec, nt, [&](std::size_t j) {
        ch[j] = m_characteristic(theta0, cumulative, q, x, tau[j], grid.tau_start);
      });
      out.theta_char.push_back(std::move(ch));
    }
    out.diagnostics.x.push_back(x);
    out.diagnostics.invariant_drift.push_back(0.0);
    out.diagnostics.max_dtheta.push_back(dtheta_max);
    out.diagnostics.detuning_drift.push_back(0.0);
  };

  const double entrance = indicator(theta);
  store(0.0, entrance);

  const int steps = grid.x_steps();
  const double dx = grid.length / steps;
  const double dx_cfl = options.cfl * ds / (3.0 * q);
  const int sub = std::max(1, static_cast<int>(std::ceil(dx / dx_cfl)));
  const double h = dx / sub;

  std::vector<double> k1(ns), k2(ns), mid(ns);
  auto tendency = [&](const std::vector<double>& th, std::vector<double>& k) {
    kernels::upwind_gradient(options.exec, th, speed, ds, grad);
    kernels::for_each_index(options.exec, ns, [&](std::size_t i) {
      k[i] = -q * m_transport_f(th[i]) * grad[i];
    });
    k[0] = 0.0;
  };

  for (int s = 1; s <= steps && grid.length > 0.0; ++s) {
    double peak = 0.0;
    for (int r = 0; r < sub; ++r) {
      tendency(theta, k1);
      for (std::size_t i = 0; i < ns; ++i) mid[i] = theta[i] + h * k1[i];
      tendency(mid, k2);
      for (std::size_t i = 0; i < ns; ++i) theta[i] += 0.5 * h * (k1[i] + k2[i]);
      peak = std::max(peak, indicator(theta));
      if (peak > options.shock_factor * entrance) break;
    }
    const bool shocked = peak > options.shock_factor * entrance;
    if (shocked || s % grid.store_every == 0 || s == steps) store(s * dx, peak);
    if (shocked) {
      out.shock = true;
      out.shock_x = s * dx;
      out.truncated = s < steps;
      break;
    }
  }
  return out;
}

WCoefficients w_coefficients(double u1, double theta2, double delta1, double omega0_sq,
                             double q) {
  const double d2 = delta1 * delta1;
  const double s = std::sin(theta2), c = std::cos(theta2);
  const double m = 1.0 + c * c;  // 2 cos^2 + sin^2
  const double den = d2 * c * c + u1 * m;
  WCoefficients w{};
  if (den > 0.0) {
    w.group_delay = q * d2 * c * c * m / (den * den);
    w.depletion = 2.0 * q * d2 * u1 * s * c / (den * den);
  }
  const double big_s = 2.0 * u1 / (d2 + 2.0 * u1);
  const double cos2phi = d2 / (d2 + 2.0 * u1);
  const double r2 = std::max(big_s * s * s + 2.0 * c * c, 1e-300);
  const double o = std::max(omega0_sq, 1e-300);
  w.mixing_speed = 2.0 * q * big_s / (o * r2 * r2);
  w.source = q * (2.0 * s * c) * cos2phi / (r2 * r2 * (d2 + 2.0 * u1)) / o;
  return w;
}

FieldGrid w_system_transport(const WEntrance& entrance, const MediumParams& medium,
                             const PropagationGrid& grid, const TransportOptions& options) {
  grid.validate();
  if (medium.q.empty() || !(medium.q[0] > 0.0)) {
    throw ContractViolation("w_system_transport: q must be > 0");
  }
  const double q = medium.q[0];
  const double d1 = entrance.delta1;
  const auto tau = grid.tau();
  const std::size_t nt = tau.size();
  const double h = grid.dtau;

  std::vector<double> u(nt), th(nt), o0(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    u[j] = entrance.omega1_sq(tau[j]);
    th[j] = entrance.theta2(tau[j]);
    o0[j] = entrance.omega0_sq(tau[j]);
    if (!(u[j] >= 0.0) || !(o0[j] >= 0.0)) {
      throw ContractViolation("w_system_transport: negative entrance intensity");
    }
  }
  const std::vector<double> u_in = u, th_in = th;

  std::vector<double> du(nt), dth(nt), dtheta(nt);
  auto max_slope = [&](const std::vector<double>& t) {
    kernels::centered_gradient(options.exec, t, h, dtheta);
    return max_abs(dtheta);
  };

  std::vector<WCoefficients> coef(nt), coef_new(nt);
  auto coefficients = [&](const std::vector<double>& uu, const std::vector<double>& tt,
                          std::vector<WCoefficients>& cf) {
    kernels::for_each_index(options.exec, nt, [&](std::size_t j) {
      cf[j] = w_coefficients(std::max(uu[j], 0.0), tt[j], d1, o0[j], q);
    });
  };

  // implicit upwind sweeps from the old state with the given coefficients
  std::vector<double> un(nt), tn(nt);
  auto sweep = [&](const std::vector<WCoefficients>& cf, const std::vector<double>& dth_src,
                   const std::vector<double>& du_src, double dx) {
    un[0] = u_in[0];
    for (std::size_t j = 1; j < nt; ++j) {
      const double c = dx * cf[j].group_delay / h;
      un[j] = (u[j] + c * un[j - 1] - dx * cf[j].depletion * dth_src[j]) / (1.0 + c);
    }
    tn[nt - 1] = th_in[nt - 1];
    for (std::size_t jj = nt - 1; jj-- > 0;) {
      // where Omega0 vanishes the angle is swept across at unbounded speed
      const double c = dx * cf[jj].mixing_speed / h;
      if (o0[jj] <= 0.0 || !(c < 1e12)) {
        tn[jj] = tn[jj + 1];
        continue;
      }
      tn[jj] = (th[jj] + c * tn[jj + 1] + dx * cf[jj].source * du_src[jj]) / (1.0 + c);
    }
  };

  FieldGrid out;
  out.kind = "transport-W";
  out.tau = tau;
  out.omega_sq.assign(4, {});

  // characteristic nodes in the energy coordinate of Omega0^2, u1 frozen
  std::vector<double> node_s, node_theta;
  std::unique_ptr<EnergyCoordinate> energy;
  std::vector<double> s_tau(nt);
  if (options.with_characteristics) {
    energy = std::make_unique<EnergyCoordinate>(entrance.omega0_sq, grid.tau_start, grid.tau_stop,
                                                16 * (nt - 1));
    node_s.resize(nt);
    node_theta.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      s_tau[j] = energy->s_of(tau[j]);
      node_s[j] = s_tau[j];
      node_theta[j] = th_in[j];
    }
  }
  auto char_rate = [&](double s, double theta) {
    const double t = energy->tau_of(std::max(s, 0.0));
    const double uu = entrance.omega1_sq(t);
    const double big_s = 2.0 * uu / (d1 * d1 + 2.0 * uu);
    const double sn = std::sin(theta), cs = std::cos(theta);
    const double r2 = std::max(big_s * sn * sn + 2.0 * cs * cs, 1e-300);
    return -2.0 * q * big_s / (r2 * r2);
  };

  auto store = [&](double x, double slope) {
    std::vector<double> w3(nt), w4(nt), ph(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      w3[j] = o0[j] * std::sin(th[j]) * std::sin(th[j]);
      w4[j] = o0[j] * std::cos(th[j]) * std::cos(th[j]);
      ph[j] = d1 == 0.0 ? std::numbers::pi / 2 : std::atan(std::sqrt(2.0 * std::max(u[j], 0.0)) / d1);
    }
    out.x.push_back(x);
    out.omega_sq[0].push_back(u);
    out.omega_sq[1].push_back(u);
    out.omega_sq[2].push_back(w3);
    out.omega_sq[3].push_back(w4);
    out.theta.push_back(th);
    out.phi.push_back(ph);
    if (options.with_characteristics) {
      // nodes overtaken by faster ones carry the same angle; sort before lookup
      std::vector<std::pair<double, double>> nodes(nt);
      for (std::size_t j = 0; j < nt; ++j) nodes[j] = {node_s[j], node_theta[j]};
      std::stable_sort(nodes.begin(), nodes.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<double> ch(nt);
      for (std::size_t j = 0; j < nt; ++j) {
        const double sj = s_tau[j];
        if (sj >= nodes.back().first) {
          ch[j] = th_in.back();
        } else if (sj <= nodes.front().first) {
          ch[j] = nodes.front().second;
        } else {
          const auto it = std::upper_bound(nodes.begin(), nodes.end(), sj,
                                           [](double v, const auto& n) { return v < n.first; });
          const auto& hi = *it;
          const auto& lo = *(it - 1);
          const double span = hi.first - lo.first;
          const double w = span > 0.0 ? (sj - lo.first) / span : 1.0;
          ch[j] = (1.0 - w) * lo.second + w * hi.second;
        }
      }
      out.theta_char.push_back(std::move(ch));
    }
    double drift = 0.0;
    out.diagnostics.x.push_back(x);
    out.diagnostics.invariant_drift.push_back(drift);
    out.diagnostics.max_dtheta.push_back(slope);
    out.diagnostics.detuning_drift.push_back(0.0);
  };

  const double entrance_slope = max_slope(th);
  store(0.0, entrance_slope);

  const int steps = grid.x_steps();
  const double dx = grid.length / steps;
  for (int s = 1; s <= steps && grid.length > 0.0; ++s) {
    coefficients(u, th, coef);
    kernels::centered_gradient(options.exec, th, h, dth);
    kernels::centered_gradient(options.exec, u, h, du);
    sweep(coef, dth, du, dx);

    // corrector: averaged coefficients and sources
    coefficients(un, tn, coef_new);
    std::vector<double> dth2(nt), du2(nt);
    kernels::centered_gradient(options.exec, tn, h, dth2);
    kernels::centered_gradient(options.exec, un, h, du2);
    for (std::size_t j = 0; j < nt; ++j) {
      coef_new[j].group_delay = 0.5 * (coef[j].group_delay + coef_new[j].group_delay);
      coef_new[j].depletion = 0.5 * (coef[j].depletion + coef_new[j].depletion);
      coef_new[j].mixing_speed = 0.5 * (coef[j].mixing_speed + coef_new[j].mixing_speed);
      coef_new[j].source = 0.5 * (coef[j].source + coef_new[j].source);
      dth2[j] = 0.5 * (dth[j] + dth2[j]);
      du2[j] = 0.5 * (du[j] + du2[j]);
    }
    sweep(coef_new, dth2, du2, dx);
    for (std::size_t j = 0; j < nt; ++j) {
      if (un[j] < 0.0) {
        if (un[j] < -1e-10 * std::max(1.0, max_abs(u_in))) {
          throw IntegrationFailure("w_system_transport: Omega_1^2 went negative; reduce dx");
        }
        un[j] = 0.0;
      }
    }
    u = un;
    th = tn;

    if (options.with_characteristics) {
      // RK4 on ds/dx for every node
      for (std::size_t j = 0; j < nt; ++j) {
        const double t0 = node_theta[j];
        double sv = node_s[j];
        const double a = char_rate(sv, t0);
        const double b = char_rate(sv + 0.5 * dx * a, t0);
        const double c = char_rate(sv + 0.5 * dx * b, t0);
        const double d = char_rate(sv + dx * c, t0);
        node_s[j] = sv + dx * (a + 2.0 * b + 2.0 * c + d) / 6.0;
      }
    }

    const double slope = max_slope(th);
    const bool shocked = slope > options.shock_factor * entrance_slope;
    if (shocked || s % grid.store_every == 0 || s == steps) store(s * dx, slope);
    if (shocked) {
      out.shock = true;
      out.shock_x = s * dx;
      out.truncated = s < steps;
      break;
    }
  }
  return out;
}

}  // namespace adtrans
