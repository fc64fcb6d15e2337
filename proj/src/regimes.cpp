#include "adtrans/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "adtrans/errors.hpp"
#include "adtrans/quasienergy.hpp"

namespace adtrans {

namespace {

DetuningConstraint eq(std::vector<double> coeffs, std::string text) {
  return {std::move(coeffs), std::move(text)};
}

LevelScheme grouped(LevelScheme s, std::vector<std::vector<int>> groups) {
  return s.with_degeneracy(std::move(groups));
}

std::vector<RegimeSpec> build_catalog() {
  std::vector<RegimeSpec> c;
  c.push_back({"lambda-dark", LevelScheme::lambda(), {eq({0, 0, 1}, "delta2 = 0")}, {}, {}, 0, 0,
               ClosedForm::LambdaDark});
  c.push_back({"lambda-delta1", grouped(LevelScheme::lambda(), {{0, 1}}),
               {eq({0, -2, 1}, "delta2 = 2 delta1")}, {{0, 1}}, {}, 1, 1, ClosedForm::LambdaShared});
  c.push_back({"a", LevelScheme::m_system(),
               {eq({0, 0, 1, 0, 0}, "delta2 = 0"), eq({0, 0, 0, 0, 1}, "delta4 = 0")}, {}, {}, 0, 0,
               ClosedForm::MDark});
  c.push_back({"b", grouped(LevelScheme::w_system(), {{0, 1}}),
               {eq({0, 1, 0, 0, -1}, "delta1 = delta4"), eq({0, -2, 1, 0, 0}, "delta2 = 2 delta1")},
               {{0, 1}}, {}, 1, 1, ClosedForm::WShared});
  c.push_back({"c", grouped(LevelScheme::ladder(), {{0, 1}, {2, 3}}),
               {eq({0, 1, -1, 0, 0}, "delta1 = delta2"), eq({0, 0, 1, -1, 0}, "delta2 = delta3"),
                eq({0, -2, 0, 0, 1}, "delta4 = 2 delta1")},
               {{0, 1}, {2, 3}}, {}, 1, 1, ClosedForm::LadderPaired});
  c.push_back({"d", grouped(LevelScheme::m_system(), {{2, 3}}),
               {eq({0, 0, 0, 1, 0}, "delta3 = 0"), eq({0, 0, 1, 0, 1}, "delta2 = -delta4")},
               {{2, 3}}, {2}, 0, 3, ClosedForm::MDegenerate});
  c.push_back({"e", grouped(LevelScheme::ladder(), {{0, 3}, {1, 2}}),
               {eq({0, -1, 2, -1, 0}, "2 delta2 = delta1 + delta3"),
                eq({0, 1, 0, 1, -1}, "delta1 + delta3 = delta4")},
               {{0, 3}, {1, 2}}, {}, 2, 2, ClosedForm::None});
  c.push_back({"f", grouped(LevelScheme::ladder(), {{0, 1}, {2, 3}}),
               {eq({0, 1, 0, -1, 0}, "delta1 = delta3"),
                eq({0, 0, -1, 3, -1}, "3 delta3 = delta2 + delta4")},
               {{0, 1}, {2, 3}}, {}, 3, 3, ClosedForm::None});
  return c;
}

std::vector<RegimeSpec> build_variants() {
  std::vector<RegimeSpec> v;
  v.push_back({"d-printed", grouped(LevelScheme::m_system(), {{2, 3}}),
               {eq({0, 0, 0, 1, 0}, "delta3 = 0"), eq({0, 0, 1, 0, -1}, "delta2 = delta4")},
               {{2, 3}}, {2}, 0, 3, ClosedForm::None});
  v.push_back({"f-printed", grouped(LevelScheme::ladder(), {{0, 1}}),
               {eq({0, 1, -1, 0, 0}, "delta1 = delta2"),
                eq({0, 0, -1, 3, -1}, "3 delta3 = delta2 + delta4")},
               {{0, 1}}, {}, 3, 3, ClosedForm::None});
  v.push_back({"f-2delta3", grouped(LevelScheme::ladder(), {{0, 1}}),
               {eq({0, 1, -1, 0, 0}, "delta1 = delta2"),
                eq({0, 0, -1, 2, -1}, "2 delta3 = delta2 + delta4")},
               {{0, 1}}, {}, 3, 3, ClosedForm::None});
  return v;
}

double tan_angle(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::copysign(std::numbers::pi / 2, num);
  return std::atan(num / den);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Eigen::MatrixXd nullspace(const RegimeSpec& spec) {
  const int n = spec.levels();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(spec.detuning_constraints.size() + 1, n);
  c(0, 0) = 1.0;
  for (std::size_t r = 0; r < spec.detuning_constraints.size(); ++r) {
    const auto& k = spec.detuning_constraints[r].coeffs;
    for (int j = 0; j < n; ++j) c(r + 1, j) = k[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > 1e-12 * s[0];
  return svd.matrixV().rightCols(n - rank);
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

const std::vector<RegimeSpec>& regime_catalog() {
  static const std::vector<RegimeSpec> catalog = build_catalog();
  return catalog;
}

const std::vector<RegimeSpec>& regime_variants() {
  static const std::vector<RegimeSpec> variants = build_variants();
  return variants;
}

const RegimeSpec& regime(const std::string& name) {
  for (const auto* list : {&regime_catalog(), &regime_variants()}) {
    for (const auto& r : *list) {
      if (r.name == name) return r;
    }
  }
  throw ContractViolation("unknown regime '" + name + "'");
}

std::optional<std::string> constraint_violation(const RegimeSpec& spec,
                                                const std::vector<double>& rabi,
                                                const std::vector<double>& delta,
                                                double rel_tol) {
  if (static_cast<int>(delta.size()) != spec.levels() ||
      static_cast<int>(rabi.size()) != spec.levels() - 1) {
    return "parameter count (" + std::to_string(spec.levels()) + " levels expected)";
  }
  double dscale = 0.0, oscale = 0.0;
  for (double d : delta) dscale = std::max(dscale, std::abs(d));
  for (double o : rabi) oscale = std::max(oscale, std::abs(o));
  if (delta[0] != 0.0) return std::string("delta0 = 0");
  for (const auto& c : spec.detuning_constraints) {
    double s = 0.0;
    for (std::size_t k = 0; k < delta.size(); ++k) s += c.coeffs[k] * delta[k];
    if (std::abs(s) > rel_tol * std::max(dscale, 1e-300)) return c.text;
  }
  for (int k : spec.nonzero_deltas) {
    if (std::abs(delta[k]) <= rel_tol * dscale) return "delta" + std::to_string(k) + " != 0";
  }
  for (const auto& rc : spec.rabi_constraints) {
    if (std::abs(rabi[rc.a] - rabi[rc.b]) > rel_tol * std::max(oscale, 1e-300)) {
      return "Omega" + std::to_string(rc.a + 1) + " = Omega" + std::to_string(rc.b + 1);
    }
  }
  return std::nullopt;
}

Eigen::VectorXd closed_form_vector(ClosedForm form, const std::vector<double>& rabi,
                                   const std::vector<double>& delta,
                                   std::map<std::string, double>* angles, double* printed_r2) {
  std::map<std::string, double> scratch;
  auto& ang = angles ? *angles : scratch;
  double pr2 = 1.0;
  Eigen::VectorXd b;

  // Components 2 and 4 (1-based) carry the opposite sign to the printed
  // forms so that the vectors are eigenvectors of H with -Omega couplings.
  switch (form) {
    case ClosedForm::LambdaDark: {
      const double t = std::atan2(rabi[0], rabi[1]);
      ang["theta"] = t;
      b.resize(3);
      b << std::cos(t), 0.0, -std::sin(t);
      break;
    }
    case ClosedForm::LambdaShared: {
      const double p = tan_angle(std::sqrt(2.0) * rabi[0], delta[1]);
      ang["Phi"] = p;
      b.resize(3);
      b << std::sin(p) / std::sqrt(2.0), -std::cos(p), -std::sin(p) / std::sqrt(2.0);
      break;
    }
    case ClosedForm::MDark: {
      const double t1 = std::atan2(rabi[0], rabi[1]);
      const double t2 = std::atan2(rabi[2], rabi[3]);
      ang["theta1"] = t1;
      ang["theta2"] = t2;
      b.resize(5);
      b << std::cos(t1) * std::cos(t2), 0.0, -std::sin(t1) * std::cos(t2), 0.0,
          std::sin(t1) * std::sin(t2);
      pr2 = 1.0 - std::pow(std::sin(t2) * std::cos(t1), 2);
      break;
    }
    case ClosedForm::WShared: {
      const double p = tan_angle(std::sqrt(2.0) * rabi[0], delta[1]);
      const double t2 = std::atan2(rabi[2], rabi[3]);
      ang["Phi"] = p;
      ang["theta2"] = t2;
      const double sp = std::sin(p), cp = std::cos(p), s2 = std::sin(t2), c2 = std::cos(t2);
      b.resize(5);
      b << sp * c2, -std::sqrt(2.0) * cp * c2, -sp * c2, 0.0, sp * s2;
      pr2 = sp * sp * s2 * s2 + 2.0 * c2 * c2;
      break;
    }
    case ClosedForm::LadderPaired: {
      const double p1 = tan_angle(rabi[0], delta[1]);
      const double p2 = tan_angle(rabi[2], delta[3]);
      ang["Phi1"] = p1;
      ang["Phi2"] = p2;
      const double s1 = std::sin(p1), c1 = std::cos(p1), s2 = std::sin(p2), c2 = std::cos(p2);
      b.resize(5);
      b << s1 * s2, -c1 * s2, -s1 * s2, s1 * c2, s1 * s2;
      pr2 = s1 * s1 + s2 * s2 + s1 * s1 * s2 * s2;
      break;
    }
    case ClosedForm::MDegenerate: {
      const double t1 = std::atan2(rabi[0], rabi[1]);
      const double p3 = tan_angle(rabi[3], delta[4]);
      ang["theta1"] = t1;
      ang["Phi3"] = p3;
      const double sp = std::sin(p3), cp = std::cos(p3), s1 = std::sin(t1), c1 = std::cos(t1);
      b.resize(5);
      b << sp * c1, 0.0, -sp * s1, cp * s1, sp * s1;
      pr2 = cp * cp + s1 * s1;
      break;
    }
    case ClosedForm::None:
      throw ContractViolation("no closed-form state");
  }
  if (printed_r2) *printed_r2 = pr2;
  return b;
}

AdiabaticState adiabatic_state(const RegimeSpec& spec, const std::vector<double>& rabi,
                               const std::vector<double>& delta) {
  if (spec.closed_form == ClosedForm::None) {
    throw ContractViolation("regime " + spec.name + " has no closed-form state");
  }
  if (auto bad = constraint_violation(spec, rabi, delta)) {
    throw RegimeMismatch("regime " + spec.name + ": constraint '" + *bad + "' does not hold");
  }
  AdiabaticState st;
  double printed_r2 = 1.0;
  const Eigen::VectorXd b =
      closed_form_vector(spec.closed_form, rabi, delta, &st.mixing_angles, &printed_r2);
  const double r = b.norm();
  if (!(r > 1e-14)) {
    throw ContractViolation("regime " + spec.name + ": closed-form normalizer vanishes");
  }
  st.normalizer = r;
  st.printed_normalizer = std::sqrt(std::max(printed_r2, 0.0));
  st.amplitudes = (b / r).cast<Complex>();
  return st;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix(seed ^ splitmix(trial + 1));
}

void draw_parameters(const RegimeSpec& spec, std::uint64_t stream_seed, std::vector<double>& rabi,
                     std::vector<double>& delta) {
  const int n = spec.levels();
  const Eigen::MatrixXd basis = nullspace(spec);
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> coef(-5.0, 5.0), amp(0.5, 5.0);

  std::vector<int> parent(n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& rc : spec.rabi_constraints) {
    parent[find_root(parent, rc.a)] = find_root(parent, rc.b);
  }

  for (int attempt = 0;; ++attempt) {
    Eigen::VectorXd z(basis.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = coef(rng);
    Eigen::VectorXd d = basis * z;
    d[0] = 0.0;
    delta.assign(d.data(), d.data() + n);
    const double dmax = d.cwiseAbs().maxCoeff();
    for (double& x : delta) {
      if (std::abs(x) < 1e-13 * dmax) x = 0.0;
    }
    std::vector<double> root_value(n - 1);
    for (int i = 0; i < n - 1; ++i) root_value[i] = amp(rng);
    rabi.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) rabi[i] = root_value[find_root(parent, i)];

    bool ok = true;
    for (int k : spec.nonzero_deltas) ok = ok && std::abs(delta[k]) >= 0.5;
    if (ok) {
      // keep the pinned candidate branch separated from its neighbours
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_hamiltonian(delta, rabi),
                                                        Eigen::EigenvaluesOnly);
      const auto& w = es.eigenvalues();
      const double target = delta[spec.pinned_index];
      Eigen::Index k = 0;
      (w.array() - target).abs().minCoeff(&k);
      double gap = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (j != k) gap = std::min(gap, std::abs(w[j] - w[k]));
      }
      ok = gap >= 0.02 * w.cwiseAbs().maxCoeff();
    }
    if (ok || attempt >= 1000) return;
  }
}

double chain_determinant(const std::vector<double>& delta, const std::vector<double>& rabi,
                         double lambda) {
  double f_prev = 1.0;
  double f = delta[0] - lambda;
  for (std::size_t k = 1; k < delta.size(); ++k) {
    const double next = (delta[k] - lambda) * f - rabi[k - 1] * rabi[k - 1] * f_prev;
    f_prev = f;
    f = next;
  }
  return f;
}

RegimeReport verify_regime(const RegimeSpec& spec, int n_trials, std::uint64_t seed,
                           bool declare_degeneracy, Exec exec) {
  if (n_trials < 1) throw ContractViolation("verify_regime: n_trials must be >= 1");
  RegimeReport report;
  report.name = spec.name;
  report.degeneracy_declared = declare_degeneracy;
  report.trials = n_trials;
  report.results.resize(n_trials);
  const LevelScheme fields = declare_degeneracy ? spec.scheme : spec.scheme.independent();
  const int n = spec.levels();

  kernels::for_each_index(exec, static_cast<std::size_t>(n_trials), [&](std::size_t t) {
    TrialResult r;
    r.trial = static_cast<int>(t);
    draw_parameters(spec, trial_seed(seed, t), r.rabi, r.delta);
    r.pinned = r.delta[spec.pinned_index];
    const Eigen::MatrixXd h = real_hamiltonian(r.delta, r.rabi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& w = es.eigenvalues();
    const double norm = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index k = 0;
    r.eigen_residual = (w.array() - r.pinned).abs().minCoeff(&k) / norm;
    r.determinant = chain_determinant(r.delta, r.rabi, r.pinned) / std::pow(norm, n);
    r.gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (j != k) r.gap = std::min(r.gap, std::abs(w[j] - w[k]) / norm);
    }
    r.eigen_hit = r.eigen_residual < kPinningTolerance;

    CVector v = es.eigenvectors().col(k).cast<Complex>();
    fix_phase(v);
    const auto sums = dipole_moments(fields, {h.cast<Complex>(), 0.0}, v);
    for (std::size_t g = 0; g < sums.size(); ++g) {
      r.dipole_sums.push_back(std::abs(sums[g]));
      if (std::abs(sums[g]) >= kDipoleTolerance) r.offending_fields.push_back(static_cast<int>(g));
    }
    r.transparent = r.eigen_hit && r.offending_fields.empty();

    if (spec.closed_form != ClosedForm::None) {
      const auto st = adiabatic_state(spec, r.rabi, r.delta);
      const CVector& a = st.amplitudes;
      r.closed_form_residual = (h.cast<Complex>() * a - r.pinned * a).norm() / norm;
      r.printed_r_mismatch = std::abs(st.printed_normalizer - st.normalizer) / st.normalizer;
    }
    report.results[t] = std::move(r);
  });

  for (const auto& r : report.results) {
    report.eigen_hits += r.eigen_hit;
    report.transparent += r.transparent;
  }
  return report;
}

}  // namespace adtrans
