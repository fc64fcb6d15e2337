// Serial reference kernels against their OpenMP versions.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "adtrans/kernels.hpp"
#include "adtrans/propagation.hpp"
#include "adtrans/regimes.hpp"
#include "adtrans/scenario.hpp"

using namespace adtrans;

namespace {

std::vector<double> grid_times(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = -6.0 + 12.0 * j / (n - 1);
  return t;
}

template <Exec E>
void BM_EigenSeries(benchmark::State& state) {
  const Scenario s = scenario("fig2_m_stirap");
  const auto times = grid_times(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto pts = kernels::eigen_series(E, s.scheme, s.train, s.detunings.multi_photon(), times);
    benchmark::DoNotOptimize(pts.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_UpwindGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> u(n), speed(n, 1.0), out(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::tanh(1e-3 * j - 5.0);
  for (auto _ : state) {
    kernels::upwind_gradient(E, u, speed, 1e-3, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec E>
void BM_VerifyRegime(benchmark::State& state) {
  const auto& spec = regime("b");
  for (auto _ : state) {
    auto rep = verify_regime(spec, static_cast<int>(state.range(0)), 11, true, E);
    benchmark::DoNotOptimize(rep.eigen_hits);
  }
}

template <Exec E>
void BM_MTransport(benchmark::State& state) {
  const Profile th0 = [](double t) { return 0.25 * M_PI * (1.0 + std::tanh(t)); };
  const Profile o2 = [](double t) { return 400.0 * std::exp(-t * t / 9.0); };
  PropagationGrid g;
  g.length = 20.0;
  g.dx = 0.5;
  g.tau_start = -12.0;
  g.tau_stop = 12.0;
  g.dtau = 0.01;
  g.store_every = 1000;
  TransportOptions opt;
  opt.exec = E;
  for (auto _ : state) {
    auto f = m_system_transport(th0, o2, 1.0, g, opt);
    benchmark::DoNotOptimize(f.theta.data());
  }
}

}  // namespace

BENCHMARK(BM_EigenSeries<Exec::Serial>)->Arg(2400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSeries<Exec::Parallel>)->Arg(2400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UpwindGradient<Exec::Serial>)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_UpwindGradient<Exec::Parallel>)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VerifyRegime<Exec::Serial>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyRegime<Exec::Parallel>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MTransport<Exec::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MTransport<Exec::Parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
