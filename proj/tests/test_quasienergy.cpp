#include <cmath>

#include "doctest.h"

#include "adtrans/errors.hpp"
#include "adtrans/quasienergy.hpp"
#include "adtrans/regimes.hpp"
#include "adtrans/scenario.hpp"

using namespace adtrans;

TEST_CASE("fix_phase makes the largest component real positive") {
  CVector v(3);
  v << Complex(0.1, 0.0), Complex(0.0, -0.9), Complex(0.2, 0.1);
  fix_phase(v);
  CHECK(v[1].imag() == doctest::Approx(0.0));
  CHECK(v[1].real() == doctest::Approx(0.9));
}

TEST_CASE("dipole moments reject non-eigenvectors and sum shared fields") {
  const auto s = LevelScheme::lambda().with_degeneracy({{0, 1}});
  const DetuningLadder d(s, {1.0, -1.0});
  const auto h = build_hamiltonian(s, std::vector<double>{1.0, 1.0}, d);
  CVector junk = CVector::Zero(3);
  junk[0] = 1.0;
  junk[1] = 1.0;
  CHECK_THROWS_AS(dipole_moments(s, h, junk.normalized()), ContractViolation);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix);
  const CVector v = es.eigenvectors().col(0);
  const auto per = transition_dipoles(v);
  const auto sum = dipole_moments(s, h, v);
  REQUIRE(sum.size() == 1);
  CHECK(std::abs(sum[0] - (per[0] + per[1])) < 1e-15);
}

TEST_CASE("fan labels connect branches to field-free detunings") {
  const Scenario sc = scenario("w_return");
  const std::vector<double> t{-12.0, -11.0};
  const auto fan = quasienergy_fan(sc.scheme, sc.train, sc.detunings, t);
  REQUIRE(fan.branch_count() == 5);
  for (int b = 0; b < 5; ++b) {
    CHECK(fan.branches[b][0] == doctest::Approx(sc.detunings.multi_photon()[fan.labels[b]]).epsilon(1e-6));
  }
}

TEST_CASE("regime constraints") {
  const auto& b = regime("b");
  CHECK_THROWS_AS(adiabatic_state(b, {1, 1, 1, 1}, {0, 1, 3, 0, 1}), RegimeMismatch);
  const auto st = adiabatic_state(b, {1, 1, 1, 1}, {0, 1, 2, 5, 1});
  CHECK(st.amplitudes.norm() == doctest::Approx(1.0));
  CHECK(st.amplitudes[3] == Complex(0.0));
  CHECK_THROWS_AS(regime("nope"), ContractViolation);
  CHECK_THROWS_AS(adiabatic_state(regime("e"), {1, 1, 1, 1}, {0, 1, 2, 3, 4}), ContractViolation);
}

TEST_CASE("pinned quasienergy is a root of the characteristic polynomial") {
  for (const auto& spec : regime_catalog()) {
    std::vector<double> rabi, delta;
    draw_parameters(spec, trial_seed(3, 0), rabi, delta);
    CHECK_FALSE(constraint_violation(spec, rabi, delta).has_value());
    const double scale = std::pow(std::max(10.0, delta.back() * delta.back()), spec.levels());
    CHECK(std::abs(chain_determinant(delta, rabi, delta[spec.pinned_index])) < 1e-9 * scale);
  }
}

TEST_CASE("literal (d) reading is not pinned") {
  const auto rep = verify_regime(regime("d-printed"), 20, 1);
  CHECK(rep.eigen_hits < rep.trials);
}
