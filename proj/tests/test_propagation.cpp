#include <cmath>

#include "doctest.h"

#include "adtrans/commands.hpp"
#include "adtrans/config.hpp"
#include "adtrans/errors.hpp"
#include "adtrans/propagation.hpp"

using namespace adtrans;

TEST_CASE("M transport coefficient peaks at 8/3") {
  CHECK(m_transport_f(0.0) == doctest::Approx(1.0));
  CHECK(m_transport_f(M_PI / 4) == doctest::Approx(kMTransportFMax));
  double best = 0.0;
  for (int i = 0; i <= 1000; ++i) best = std::max(best, m_transport_f(i * M_PI / 2000));
  CHECK(best <= kMTransportFMax + 1e-12);
}

TEST_CASE("length scales are inversely proportional to q") {
  for (const char* kind : {"M", "W"}) {
    LengthParams p;
    p.omega0_sq = 400;
    p.T = 2;
    p.W0 = 5;
    const auto a = adiabaticity_lengths(kind, p);
    p.q = 4;
    p.q1 = 4;
    const auto b = adiabaticity_lengths(kind, p);
    REQUIRE(a.size() == b.size());
    for (const auto& [name, s] : a) CHECK(b.at(name).value == doctest::Approx(s.value / 4));
  }
  LengthParams m;
  m.omega0_sq = 8;
  m.T = 3;
  CHECK(adiabaticity_lengths("M", m).at("L_shock_M").value == doctest::Approx(9.0));
  m.q = 0;
  CHECK_THROWS_AS(adiabaticity_lengths("M", m), ContractViolation);
}

TEST_CASE("fit_line and crossing_time") {
  const auto [slope, icept] = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(slope == doctest::Approx(2.0));
  CHECK(icept == doctest::Approx(1.0));
  CHECK(crossing_time({0, 1, 2}, {0.0, 1.0, 2.0}, 1.5) == doctest::Approx(1.5));
  CHECK(std::isnan(crossing_time({0, 1}, {0.0, 0.1}, 1.0)));
}

TEST_CASE("medium and grid contracts") {
  CHECK_THROWS_AS(MediumParams::uniform(2, 0.0).validate(2), ContractViolation);
  MediumParams m = MediumParams::uniform(2, 1.0);
  m.alpha0 = 2.0;
  m.linewidth = 2.0;
  CHECK_THROWS_AS(m.validate(2), ContractViolation);
  m.linewidth = 0.5;
  CHECK_NOTHROW(m.validate(2));
  PropagationGrid g;
  g.dx = -1;
  CHECK_THROWS_AS(g.validate(), ContractViolation);
}

TEST_CASE("short reduced run keeps pair invariants and detunings") {
  RunConfig c = parse_config(scenario_dir() / "m_propagation.yaml");
  c = with_overrides(c, {2.0, 0.25, 0.04});
  const auto r = run_propagate(c);
  CHECK(all_pass(r.checks));
  CHECK(r.fields.x.back() == doctest::Approx(2.0));
  for (double d : r.fields.diagnostics.invariant_drift) CHECK(d < 1e-6);
  for (double d : r.fields.diagnostics.detuning_drift) CHECK(d < 1e-8);
}

TEST_CASE("M transport follows its characteristic solution") {
  const Profile th = [](double t) { return M_PI / 4 * (1 + std::tanh(t)); };
  const Profile w = [](double t) { return 400 * std::exp(-t * t / 9); };
  PropagationGrid g{3.0, 0.05, -12, 12, 0.01, 20};
  const auto f = m_system_transport(th, w, 1.0, g);
  REQUIRE_FALSE(f.theta_char.empty());
  double worst = 0;
  for (std::size_t j = 0; j < f.tau.size(); ++j) {
    worst = std::max(worst, std::abs(f.theta.back()[j] - f.theta_char.back()[j]));
  }
  CHECK(worst < 1e-3);
}
