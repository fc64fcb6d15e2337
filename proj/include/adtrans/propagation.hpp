#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adtrans/kernels.hpp"
#include "adtrans/level_scheme.hpp"
#include "adtrans/regimes.hpp"

namespace adtrans {

/// Medium coupling per transition (frequency^2 per unit length in scenario units).
struct MediumParams {
  std::vector<double> q;
  std::optional<double> alpha0;     // line-centre absorption coefficient
  std::optional<double> linewidth;  // Gamma, alpha0 * Gamma = q
  double c = std::numeric_limits<double>::infinity();

  /// Throws ContractViolation for q <= 0 or an inconsistent alpha0 / Gamma pair.
  void validate(int transitions) const;
  static MediumParams uniform(int transitions, double q);
};

using Profile = std::function<double(double)>;

/// x-tau grid. x runs over [0, length] in steps of dx; every `store_every`-th
/// x slice is kept (the last one always).
struct PropagationGrid {
  double length = 1.0;
  double dx = 1e-2;
  double tau_start = -10.0;
  double tau_stop = 10.0;
  double dtau = 1e-2;
  int store_every = 1;

  std::vector<double> tau() const;
  int x_steps() const;
  void validate() const;
};

struct Diagnostics {
  std::vector<double> x;
  std::vector<double> invariant_drift;  // max_tau |I(x) - I(0)| / max I(0)
  std::vector<double> max_dtheta;       // max_tau |d theta / d tau|
  std::vector<double> detuning_drift;   // max |Delta_i(x) - Delta_i(0)|
};

/// Discretized fields. Slices are indexed [stored x][tau].
struct FieldGrid {
  std::vector<double> x;
  std::vector<double> tau;
  std::vector<std::vector<std::vector<double>>> omega_sq;  // [transition][x][tau]
  std::vector<std::vector<std::vector<double>>> delta;     // one-photon, [transition][x][tau]
  std::vector<std::vector<double>> theta;                  // [x][tau]
  std::vector<std::vector<double>> phi;                    // W runs only
  std::vector<std::vector<double>> theta_char;             // characteristic solution, if any
  Diagnostics diagnostics;
  bool shock = false;
  std::optional<double> shock_x;  // first x where the shock indicator fired
  bool truncated = false;         // stopped at the shock before `length`
  std::string kind;               // "reduced-M", "reduced-W", "transport-M", "transport-W"
};

/// Entrance data for propagate_reduced: squared Rabi field and one-photon
/// detuning per transition as functions of tau. Transitions in one
/// degeneracy group must carry identical profiles (the leader's is used).
struct EntranceFields {
  std::vector<Profile> omega_sq;
  std::vector<Profile> delta;
};

struct ReducedOptions {
  /// Transition pairs whose summed intensity is an integral of motion.
  std::vector<std::pair<int, int>> invariant_pairs;
  double newton_tol = 1e-10;
  /// Newton also stops once the residual stops shrinking below this level.
  double newton_floor = 1e-8;
  int newton_max_iter = 30;
  /// A step whose Newton iteration fails, or that drives an intensity
  /// negative, is split in halves up to this depth.
  int max_halvings = 12;
  double shock_factor = 10.0;
  /// Per degeneracy group: +1 backward-biased tau differences (field travels
  /// toward later tau), -1 forward-biased, 0 centered. Empty: signs of the
  /// linearized speeds at the entrance.
  std::vector<int> tau_direction;
  /// Tau points where an invariant pair's summed intensity is at most this
  /// fraction of its peak are held at the entrance values.
  double freeze_below = 1e-6;
  /// Intensities below -negative_tolerance * max entrance intensity abort the run.
  double negative_tolerance = 1e-6;
  Exec exec = Exec::Parallel;
};

/// Trapezoidal (implicit) x-marching of the reduced intensity equations
///   dOmega_k^2/dx = s_k q_k d/dtau sum_{i<=k} |b_i|^2,  s_k = +1 Up, -1 Down
/// with right-hand sides added inside degeneracy groups, populations from the
/// closure regime's closed-form state of the local fields, and
///   dDelta_i/dx = q_i d/dtau [Re(b_i^* b_{i+1}) / Omega_i]
/// shared by the members of a group. tau derivatives of the intensity
/// fluxes are second-order upwind per field (see tau_direction); the
/// detuning equations use centered differences with one-sided ends. Throws IntegrationFailure if an intensity turns negative
/// or Newton fails to converge.
FieldGrid propagate_reduced(const LevelScheme& scheme, const EntranceFields& entrance,
                            const MediumParams& medium, const RegimeSpec& closure,
                            const PropagationGrid& grid, const ReducedOptions& options = {});

/// Populations |b_i|^2 of the closure state for one set of local fields.
std::vector<double> closure_populations(const RegimeSpec& closure, const std::vector<double>& rabi,
                                        const std::vector<double>& multi_photon);

/// f(theta) = (1 + 2 cos^2 sin^2) / (1 - cos^2 sin^2)^2 of the M-system transport.
double m_transport_f(double theta);
inline constexpr double kMTransportFMax = 8.0 / 3.0;

struct TransportOptions {
  double cfl = 0.4;
  int energy_points = 0;  // 0: same count as the tau grid
  double shock_factor = 10.0;
  bool with_characteristics = true;
  Exec exec = Exec::Parallel;
};

/// theta_x + (q f(theta) / Omega0^2) theta_tau = 0, solved in the energy
/// coordinate s = int Omega0^2 dtau with second-order upwinding and Heun
/// steps, inflow fixed at the first tau. Stops at the shock (max |theta_tau|
/// above shock_factor times its entrance value) and marks the grid truncated.
/// theta_char holds the characteristic solution theta0(tau') with
/// S(tau) - S(tau') = q x f(theta0(tau')).
FieldGrid m_system_transport(const Profile& theta0, const Profile& omega0_sq, double q,
                             const PropagationGrid& grid, const TransportOptions& options = {});

/// Characteristic solution of the M transport at one (x, tau); S is the
/// cumulative integral of Omega0^2 from tau_start.
double m_characteristic(const Profile& theta0, const Profile& cumulative, double q, double x,
                        double tau, double tau_start);

/// W-system regime-(b) coefficients for u1 = Omega_1^2, theta2, delta1 and Omega0^2 = Omega_3^2 + Omega_4^2.
struct WCoefficients {
  double group_delay;  // 1/u_1 - 1/c
  double depletion;    // k in du1/dx + a du1/dtau = -k dtheta2/dtau
  double mixing_speed; // theta2 moves with d tau / dx = -mixing_speed
  double source;       // coefficient of d u1 / d tau on the right of the theta2 equation
};
WCoefficients w_coefficients(double u1, double theta2, double delta1, double omega0_sq, double q);

struct WEntrance {
  Profile omega1_sq;
  Profile theta2;
  Profile omega0_sq;  // Omega_3^2 + Omega_4^2
  double delta1 = 10.0;
};

/// Joint implicit-upwind marching of
///   du1/dx + a du1/dtau = -k dtheta2/dtau                 (u1 sweep, increasing tau)
///   dtheta2/dx - b dtheta2/dtau = (q B / Omega0^2) du1/dtau (theta2 sweep, decreasing tau)
/// with a predictor pass on lagged coefficients and one averaged corrector.
/// theta_char holds the right-hand-side-free characteristic solution of
/// the theta2 equation with u1 frozen at its entrance profile.
FieldGrid w_system_transport(const WEntrance& entrance, const MediumParams& medium,
                             const PropagationGrid& grid, const TransportOptions& options = {});

struct LengthScale {
  double value;
  std::string criterion;
};

struct LengthParams {
  double q = 1.0;
  double omega0_sq = 1.0;  // peak Omega_0^2
  double T = 1.0;          // pulse (or mixing-angle ramp) duration
  double delta1 = 10.0;
  double T1 = 1.0;         // duration of the Omega_4 pulse
  double omega01_sq = 1.0; // peak Omega_1^2
  double W0 = 0.0;         // entrance energy of Omega_1
  double q1 = 1.0;
};

/// "M" or "W". Every scale is inversely proportional to q.
std::map<std::string, LengthScale> adiabaticity_lengths(const std::string& kind,
                                                        const LengthParams& p);

struct EnergyAudit {
  std::vector<double> x;
  std::vector<std::vector<double>> W;  // [transition][x]
  std::vector<double> slope;           // least-squares dW_i/dx
  std::vector<std::string> warnings;
};

/// W_i(x) = int Omega_i^2 dtau by the trapezoid rule.
EnergyAudit energy_audit(const FieldGrid& grid);

/// Least-squares slope and intercept of y(x).
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// tau where `row` first crosses `level` (linear interpolation), NaN if never.
double crossing_time(const std::vector<double>& tau, const std::vector<double>& row, double level);

}  // namespace adtrans
