#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "adtrans/level_scheme.hpp"

namespace adtrans {

enum class Shape { Gaussian, SinSquared, Constant, PiecewiseLinear };

std::string_view to_string(Shape s);
Shape shape_from_string(std::string_view s);

/// Real, nonnegative Rabi envelope. Times in units of T, frequencies in 1/T.
///
///   Gaussian:        peak * exp(-(t - center)^2 / width^2)
///   SinSquared:      peak * cos^2(pi (t - center) / (2 width)) for |t - center| < width
///   Constant:        peak
///   PiecewiseLinear: peak * interp(points), zero outside the first/last knot
///
/// When `on_interval` is set the envelope is zero outside [first, second].
struct PulseEnvelope {
  Shape shape = Shape::Gaussian;
  double peak_rabi = 0.0;
  double center = 0.0;
  double width = 1.0;
  std::optional<std::pair<double, double>> on_interval;
  std::vector<std::pair<double, double>> points;  // (t, relative value) knots

  double operator()(double t) const;
  /// Throws ContractViolation when the envelope could go negative.
  void validate() const;

  friend bool operator==(const PulseEnvelope&, const PulseEnvelope&) = default;
};

PulseEnvelope gaussian(double peak, double center, double width);

/// One envelope per transition. Transitions that share a field (same
/// degeneracy group) are driven by the envelope of the group leader.
struct PulseTrain {
  std::vector<PulseEnvelope> envelopes;
  friend bool operator==(const PulseTrain&, const PulseTrain&) = default;
};

/// Omega_i(t) for every transition.
std::vector<double> sample_pulses(const LevelScheme& scheme, const PulseTrain& train, double t);
void sample_pulses(const LevelScheme& scheme, const PulseTrain& train, double t,
                   std::vector<double>& out);

/// Largest peak over all transitions.
double max_peak(const PulseTrain& train);

}  // namespace adtrans
