#include <random>

#include "doctest.h"

#include "adtrans/kernels.hpp"
#include "adtrans/regimes.hpp"
#include "adtrans/scenario.hpp"

using namespace adtrans;

namespace {

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("gradients: serial and OpenMP agree exactly") {
  const auto u = noise(4099, 1);
  const auto speed = noise(4099, 2);
  std::vector<double> a(u.size()), b(u.size());
  kernels::upwind_gradient_serial(u, speed, 0.1, a);
  kernels::upwind_gradient_omp(u, speed, 0.1, b);
  CHECK(a == b);
  kernels::centered_gradient_serial(u, 0.1, a);
  kernels::centered_gradient_omp(u, 0.1, b);
  CHECK(a == b);
}

TEST_CASE("upwind gradient is exact on a quadratic") {
  std::vector<double> u(50), s(50, 1.0), g(50);
  for (int i = 0; i < 50; ++i) u[i] = 0.5 * i * i;
  kernels::upwind_gradient_serial(u, s, 1.0, g);
  CHECK(g[0] == 0.0);
  for (int i = 2; i < 50; ++i) CHECK(g[i] == doctest::Approx(i));
}

TEST_CASE("eigen series: serial and OpenMP agree exactly") {
  const Scenario sc = scenario("w_return");
  const auto t = sc.times();
  const auto& m = sc.detunings.multi_photon();
  const auto a = kernels::eigen_series_serial(sc.scheme, sc.train, m, t);
  const auto b = kernels::eigen_series_omp(sc.scheme, sc.train, m, t);
  REQUIRE(a.size() == b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a[j].values == b[j].values);
    CHECK(a[j].vectors == b[j].vectors);
  }
}

TEST_CASE("regime verification is independent of execution mode") {
  const auto a = verify_regime(regime("c"), 64, 11, true, Exec::Serial);
  const auto b = verify_regime(regime("c"), 64, 11, true, Exec::Parallel);
  CHECK(a.eigen_hits == b.eigen_hits);
  CHECK(a.transparent == b.transparent);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].rabi == b.results[i].rabi);
  }
}
