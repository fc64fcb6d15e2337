#include "adtrans/kernels.hpp"

#include <omp.h>

#include "adtrans/errors.hpp"
#include "adtrans/hamiltonian.hpp"

namespace adtrans {

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

namespace kernels {

namespace {

EigenPoint solve_at(const LevelScheme& scheme, const PulseTrain& train,
                    std::span<const double> multi_photon, double t,
                    std::vector<double>& rabi) {
  sample_pulses(scheme, train, t, rabi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_hamiltonian(multi_photon, rabi));
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

std::vector<EigenPoint> eigen_series_serial(const LevelScheme& scheme, const PulseTrain& train,
                                            std::span<const double> multi_photon,
                                            std::span<const double> times) {
  std::vector<EigenPoint> out(times.size());
  std::vector<double> rabi;
  for (std::size_t j = 0; j < times.size(); ++j) {
    out[j] = solve_at(scheme, train, multi_photon, times[j], rabi);
  }
  return out;
}

std::vector<EigenPoint> eigen_series_omp(const LevelScheme& scheme, const PulseTrain& train,
                                         std::span<const double> multi_photon,
                                         std::span<const double> times) {
  std::vector<EigenPoint> out(times.size());
  const auto n = static_cast<long long>(times.size());
#pragma omp parallel
  {
    std::vector<double> rabi;
#pragma omp for schedule(static)
    for (long long j = 0; j < n; ++j) {
      out[j] = solve_at(scheme, train, multi_photon, times[j], rabi);
    }
  }
  return out;
}

std::vector<EigenPoint> eigen_series(Exec exec, const LevelScheme& scheme,
                                     const PulseTrain& train,
                                     std::span<const double> multi_photon,
                                     std::span<const double> times) {
  return exec == Exec::Parallel ? eigen_series_omp(scheme, train, multi_photon, times)
                                : eigen_series_serial(scheme, train, multi_photon, times);
}

namespace {

inline double upwind_at(std::span<const double> u, std::span<const double> speed, double h,
                        std::size_t j) {
  const std::size_t n = u.size();
  if (speed[j] > 0.0) {
    if (j == 0) return 0.0;
    if (j == 1) return (u[1] - u[0]) / h;
    return (3.0 * u[j] - 4.0 * u[j - 1] + u[j - 2]) / (2.0 * h);
  }
  if (speed[j] < 0.0) {
    if (j + 1 == n) return 0.0;
    if (j + 2 == n) return (u[j + 1] - u[j]) / h;
    return (-3.0 * u[j] + 4.0 * u[j + 1] - u[j + 2]) / (2.0 * h);
  }
  return 0.0;
}

inline double centered_at(std::span<const double> u, double h, std::size_t j) {
  const std::size_t n = u.size();
  if (j == 0) return (u[1] - u[0]) / h;
  if (j + 1 == n) return (u[n - 1] - u[n - 2]) / h;
  return (u[j + 1] - u[j - 1]) / (2.0 * h);
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw ContractViolation("gradient kernel: size mismatch");
  if (a < 2) throw ContractViolation("gradient kernel: need at least two points");
}

}  // namespace

void upwind_gradient_serial(std::span<const double> u, std::span<const double> speed, double h,
                            std::span<double> out) {
  check_sizes(u.size(), speed.size());
  check_sizes(u.size(), out.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = upwind_at(u, speed, h, j);
}

void upwind_gradient_omp(std::span<const double> u, std::span<const double> speed, double h,
                         std::span<double> out) {
  check_sizes(u.size(), speed.size());
  check_sizes(u.size(), out.size());
  const auto n = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < n; ++j) out[j] = upwind_at(u, speed, h, static_cast<std::size_t>(j));
}

void upwind_gradient(Exec exec, std::span<const double> u, std::span<const double> speed,
                     double h, std::span<double> out) {
  if (exec == Exec::Parallel) {
    upwind_gradient_omp(u, speed, h, out);
  } else {
    upwind_gradient_serial(u, speed, h, out);
  }
}

void centered_gradient_serial(std::span<const double> u, double h, std::span<double> out) {
  check_sizes(u.size(), out.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = centered_at(u, h, j);
}

void centered_gradient_omp(std::span<const double> u, double h, std::span<double> out) {
  check_sizes(u.size(), out.size());
  const auto n = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < n; ++j) out[j] = centered_at(u, h, static_cast<std::size_t>(j));
}

void centered_gradient(Exec exec, std::span<const double> u, double h, std::span<double> out) {
  if (exec == Exec::Parallel) {
    centered_gradient_omp(u, h, out);
  } else {
    centered_gradient_serial(u, h, out);
  }
}

}  // namespace kernels
}  // namespace adtrans
