#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adtrans/hamiltonian.hpp"
#include "adtrans/kernels.hpp"
#include "adtrans/level_scheme.hpp"

namespace adtrans {

/// sum_k coeffs[k] * delta_k = 0 over the multiphoton ladder (delta_0 included).
struct DetuningConstraint {
  std::vector<double> coeffs;
  std::string text;
};

/// Omega_a = Omega_b (0-based transitions).
struct RabiConstraint {
  int a = 0;
  int b = 0;
};

enum class ClosedForm { None, LambdaDark, LambdaShared, MDark, WShared, LadderPaired, MDegenerate };

/// A transparency regime: constraints plus the quasienergy it pins.
struct RegimeSpec {
  std::string name;
  LevelScheme scheme;  // chain plus the field sharing the regime assumes
  std::vector<DetuningConstraint> detuning_constraints;
  std::vector<RabiConstraint> rabi_constraints;
  std::vector<int> nonzero_deltas;  // delta_k that must stay away from 0
  int pinned_index = 0;             // the regime claims lambda = delta_{pinned_index}
  int required_initial_state = 0;   // bare level, 0-based
  ClosedForm closed_form = ClosedForm::None;

  int levels() const { return scheme.levels(); }
};

/// The eight catalog entries: "lambda-dark", "lambda-delta1", "a" ... "f".
/// Entries (d) and (f) carry the corrected conditions (see README).
const std::vector<RegimeSpec>& regime_catalog();

/// Literal readings kept for arbitration: "d-printed", "f-printed", "f-2delta3".
const std::vector<RegimeSpec>& regime_variants();

/// Looks up catalog entries and variants; throws ContractViolation otherwise.
const RegimeSpec& regime(const std::string& name);

/// Name of the first violated equality, or nullopt. Tolerance is relative
/// to the largest |delta| (detunings) and the largest Omega (Rabi values).
std::optional<std::string> constraint_violation(const RegimeSpec& spec,
                                                const std::vector<double>& rabi,
                                                const std::vector<double>& delta,
                                                double rel_tol = 1e-10);

struct AdiabaticState {
  CVector amplitudes;
  std::map<std::string, double> mixing_angles;
  double normalizer = 1.0;          // R actually used
  double printed_normalizer = 1.0;  // R as printed for the closed form
};

/// Unnormalized closed-form vector and its mixing angles; no constraint checks.
/// printed_r2 receives the square of the normalizer as printed for the form.
Eigen::VectorXd closed_form_vector(ClosedForm form, const std::vector<double>& rabi,
                                   const std::vector<double>& delta,
                                   std::map<std::string, double>* angles = nullptr,
                                   double* printed_r2 = nullptr);

/// Closed-form eigenvector of the regime with eigenvalue delta_pinned.
/// Throws RegimeMismatch naming the failed equality and ContractViolation
/// for regimes without a closed form or a vanishing normalizer.
AdiabaticState adiabatic_state(const RegimeSpec& spec, const std::vector<double>& rabi,
                               const std::vector<double>& delta);

struct TrialResult {
  int trial = 0;
  std::vector<double> delta;
  std::vector<double> rabi;
  double pinned = 0.0;
  double eigen_residual = 0.0;   // min_k |lambda_k - pinned| / ||H||_2
  double determinant = 0.0;      // det(H - pinned) / ||H||_2^n, by recurrence
  double gap = 0.0;              // distance to the next eigenvalue / ||H||_2
  bool eigen_hit = false;
  std::vector<double> dipole_sums;  // |per-field sum| for each field
  std::vector<int> offending_fields;
  bool transparent = false;
  double closed_form_residual = -1.0;  // -1 when no closed form applies
  double printed_r_mismatch = 0.0;     // |R_printed - R_used| / R_used
};

struct RegimeReport {
  std::string name;
  bool degeneracy_declared = true;
  int trials = 0;
  int eigen_hits = 0;
  int transparent = 0;
  std::vector<TrialResult> results;
};

inline constexpr double kPinningTolerance = 1e-8;
inline constexpr double kDipoleTolerance = 1e-8;

/// Per-trial deterministic stream seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Random parameters satisfying the regime's constraints.
void draw_parameters(const RegimeSpec& spec, std::uint64_t stream_seed,
                     std::vector<double>& rabi, std::vector<double>& delta);

/// Numerical verification over n_trials random draws. When
/// `declare_degeneracy` is false every transition is treated as its own field.
RegimeReport verify_regime(const RegimeSpec& spec, int n_trials, std::uint64_t seed,
                           bool declare_degeneracy = true, Exec exec = Exec::Parallel);

/// det(H - lambda I) of the tridiagonal chain by the three-term recurrence.
double chain_determinant(const std::vector<double>& delta, const std::vector<double>& rabi,
                         double lambda);

}  // namespace adtrans
