#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference
// next to its OpenMP version; tests require both to agree bit for bit.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adtrans/level_scheme.hpp"
#include "adtrans/pulses.hpp"

namespace adtrans {

enum class Exec { Serial, Parallel };

/// Sets the OpenMP team size; n <= 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

namespace kernels {

/// Applies fn(i) for i in [0, n). Parallel iterations must be independent.
template <class Fn>
void for_each_index_serial(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
void for_each_index_omp(std::size_t n, Fn&& fn) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::Parallel) {
    for_each_index_omp(n, fn);
  } else {
    for_each_index_serial(n, fn);
  }
}

/// Eigen decomposition of H(t_j) (real symmetric tridiagonal) at every time.
struct EigenPoint {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

std::vector<EigenPoint> eigen_series_serial(const LevelScheme& scheme, const PulseTrain& train,
                                            std::span<const double> multi_photon,
                                            std::span<const double> times);
std::vector<EigenPoint> eigen_series_omp(const LevelScheme& scheme, const PulseTrain& train,
                                         std::span<const double> multi_photon,
                                         std::span<const double> times);
std::vector<EigenPoint> eigen_series(Exec exec, const LevelScheme& scheme,
                                     const PulseTrain& train,
                                     std::span<const double> multi_photon,
                                     std::span<const double> times);

/// d u / d s on a uniform grid, upwind-biased by the sign of `speed`:
/// speed > 0 means values travel toward larger index. Second order in the
/// interior, first order next to the boundary, zero at an inflow node.
void upwind_gradient_serial(std::span<const double> u, std::span<const double> speed, double h,
                            std::span<double> out);
void upwind_gradient_omp(std::span<const double> u, std::span<const double> speed, double h,
                         std::span<double> out);
void upwind_gradient(Exec exec, std::span<const double> u, std::span<const double> speed,
                     double h, std::span<double> out);

/// Centered first derivative on a uniform grid with one-sided ends.
void centered_gradient_serial(std::span<const double> u, double h, std::span<double> out);
void centered_gradient_omp(std::span<const double> u, double h, std::span<double> out);
void centered_gradient(Exec exec, std::span<const double> u, double h, std::span<double> out);

}  // namespace kernels
}  // namespace adtrans
