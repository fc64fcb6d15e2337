#include <cmath>

#include "doctest.h"

#include "adtrans/errors.hpp"
#include "adtrans/hamiltonian.hpp"
#include "adtrans/level_scheme.hpp"
#include "adtrans/pulses.hpp"

using namespace adtrans;

TEST_CASE("multiphoton detunings follow orientation signs") {
  const auto l = multiphoton_detunings(LevelScheme::lambda(), std::vector<double>{3.0, 3.0});
  CHECK(l == std::vector<double>{0.0, 3.0, 0.0});
  const auto w = multiphoton_detunings(LevelScheme::w_system(), std::vector<double>{-10, 10, 20, 10});
  CHECK(w == std::vector<double>{0.0, 10.0, 20.0, 0.0, 10.0});
  const auto lad = multiphoton_detunings(LevelScheme::ladder(), std::vector<double>{1, 2, 3, 4});
  CHECK(lad.back() == doctest::Approx(10.0));
}

TEST_CASE("hamiltonian is hermitian, tridiagonal, with -Omega couplings") {
  const auto s = LevelScheme::m_system();
  const DetuningLadder d(s, {1.0, 2.0, 3.0, 4.0});
  const auto h = build_hamiltonian(s, std::vector<double>{0.5, 1.5, 2.5, 3.5}, d);
  CHECK(hermiticity_defect(h.matrix) == 0.0);
  CHECK(band_defect(h.matrix) == 0.0);
  CHECK(h.matrix(1, 2).real() == -1.5);
  CHECK(h.matrix(2, 1).real() == -1.5);
  CHECK(h.matrix(1, 1).real() == 1.0);
  CHECK(h.matrix(2, 2).real() == doctest::Approx(-1.0));
}

TEST_CASE("level scheme contracts") {
  CHECK_THROWS_AS(LevelScheme(1, {}), ContractViolation);
  CHECK_THROWS_AS(LevelScheme(9, std::vector<Orientation>(8, Orientation::Up)), ContractViolation);
  CHECK_THROWS_AS(LevelScheme(3, {Orientation::Up}), ContractViolation);
  CHECK_THROWS_AS(LevelScheme::named("Z"), ContractViolation);
  const auto w = LevelScheme::w_system().with_degeneracy({{0, 1}});
  CHECK(w.shares_field(0, 1));
  CHECK_FALSE(w.shares_field(1, 2));
  CHECK(w.groups().size() == 3);
  CHECK(w.group_leader(1) == 0);
}

TEST_CASE("pulse envelopes") {
  const auto g = gaussian(2.0, 1.0, 0.5);
  CHECK(g(1.0) == 2.0);
  CHECK(g(1.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  PulseEnvelope bad = gaussian(-1.0, 0, 1);
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  PulseEnvelope s2{Shape::SinSquared, 3.0, 0.0, 1.0, std::nullopt, {}};
  CHECK(s2(0.0) == 3.0);
  CHECK(s2(1.2) == 0.0);
  PulseEnvelope gated = gaussian(1.0, 0, 1);
  gated.on_interval = std::pair{-0.5, 0.5};
  CHECK(gated(0.6) == 0.0);
}

TEST_CASE("shared fields take the group leader's envelope") {
  const auto s = LevelScheme::w_system().with_degeneracy({{0, 1}});
  PulseTrain t{{gaussian(1, 0, 1), gaussian(9, 0, 1), gaussian(2, 0, 1), gaussian(3, 0, 1)}};
  const auto r = sample_pulses(s, t, 0.0);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 1.0);
  CHECK(r[3] == 3.0);
}
