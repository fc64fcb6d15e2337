#include "doctest.h"

#include "adtrans/dynamics.hpp"
#include "adtrans/errors.hpp"
#include "adtrans/scenario.hpp"

using namespace adtrans;

TEST_CASE("sample times end exactly at stop") {
  const TimeGrid g{-1.0, 1.0, 0.1, 3};
  const auto t = g.sample_times();
  CHECK(t.front() == -1.0);
  CHECK(t.back() == 1.0);
  CHECK(t.size() == 8);
}

TEST_CASE("evolve keeps the norm and rejects unresolved steps") {
  Scenario s = scenario("fig2_m_stirap");
  s.grid.step = 1e-2;
  CHECK_THROWS_AS(evolve(s.scheme, s.train, s.detunings, s.psi0(), s.grid), ContractViolation);
  s.grid.step = 4e-4;
  s.grid.stride = 50;
  const auto tr = evolve(s.scheme, s.train, s.detunings, s.psi0(), s.grid);
  CHECK(tr.max_norm_error() < 1e-9);
  CHECK(tr.times == s.times());
  CAPTURE(tr.final_populations()[4]);
  CHECK(tr.final_populations()[4] > 0.99);
  CVector bad = CVector::Zero(5);
  bad[0] = 2.0;
  CHECK_THROWS_AS(evolve(s.scheme, s.train, s.detunings, bad, s.grid), ContractViolation);
}

TEST_CASE("monitor separates adiabatic and nonadiabatic runs") {
  for (double peak : {30.0, 1.0}) {
    Scenario s = with_peak(scenario("fig2_m_stirap"), peak);
    s.grid.step = 2e-4;
    s.grid.stride = 50;
    const auto tr = evolve(s.scheme, s.train, s.detunings, s.psi0(), s.grid);
    const auto fan = quasienergy_fan(s.scheme, s.train, s.detunings, tr.times);
    const auto mon = adiabaticity_monitor(fan, tr, s.monitor);
    CAPTURE(peak);
    CAPTURE(mon.max_ratio);
    CHECK(mon.adiabatic == (peak > 10.0));
  }
}

TEST_CASE("scenario catalog") {
  CHECK(scenario_names().size() == 3);
  CHECK_THROWS_AS(scenario("fig4"), ContractViolation);
  const auto w = scenario("w_return");
  CHECK(w.initial_level == 1);
  CHECK(w.scheme.shares_field(0, 1));
  CHECK(scenario("fig2_m_stirap") == scenario("fig2_m_stirap"));
  CHECK_FALSE(scenario("fig2_m_stirap") == with_peak(scenario("fig2_m_stirap"), 20));
}
