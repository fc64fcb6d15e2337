#include "adtrans/pulses.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "adtrans/errors.hpp"

namespace adtrans {

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::Gaussian: return "gaussian";
    case Shape::SinSquared: return "sin2";
    case Shape::Constant: return "constant";
    case Shape::PiecewiseLinear: return "piecewise";
  }
  return "?";
}

Shape shape_from_string(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (l == "gaussian") return Shape::Gaussian;
  if (l == "sin2" || l == "sinsquared" || l == "sin_squared") return Shape::SinSquared;
  if (l == "constant") return Shape::Constant;
  if (l == "piecewise" || l == "piecewiselinear" || l == "piecewise_linear") {
    return Shape::PiecewiseLinear;
  }
  throw ContractViolation("unknown pulse shape '" + std::string(s) + "'");
}

double PulseEnvelope::operator()(double t) const {
  if (on_interval && (t < on_interval->first || t > on_interval->second)) return 0.0;
  switch (shape) {
    case Shape::Gaussian: {
      const double u = (t - center) / width;
      return peak_rabi * std::exp(-u * u);
    }
    case Shape::SinSquared: {
      const double u = (t - center) / width;
      if (std::abs(u) >= 1.0) return 0.0;
      const double c = std::cos(0.5 * std::numbers::pi * u);
      return peak_rabi * c * c;
    }
    case Shape::Constant:
      return peak_rabi;
    case Shape::PiecewiseLinear: {
      if (points.empty() || t < points.front().first || t > points.back().first) return 0.0;
      auto hi = std::upper_bound(points.begin(), points.end(), t,
                                 [](double v, const auto& p) { return v < p.first; });
      if (hi == points.end()) return peak_rabi * points.back().second;
      auto lo = std::prev(hi);
      const double span = hi->first - lo->first;
      const double w = span > 0 ? (t - lo->first) / span : 0.0;
      return peak_rabi * ((1.0 - w) * lo->second + w * hi->second);
    }
  }
  return 0.0;
}

void PulseEnvelope::validate() const {
  if (!(peak_rabi >= 0.0) || !std::isfinite(peak_rabi)) {
    throw ContractViolation("peak Rabi frequency must be finite and >= 0, got " +
                            std::to_string(peak_rabi));
  }
  if ((shape == Shape::Gaussian || shape == Shape::SinSquared) && !(width > 0.0)) {
    throw ContractViolation("pulse width must be > 0");
  }
  if (shape == Shape::PiecewiseLinear) {
    if (points.size() < 2) throw ContractViolation("piecewise envelope needs at least two knots");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].second < 0.0) throw ContractViolation("piecewise envelope knot below zero");
      if (i > 0 && !(points[i].first > points[i - 1].first)) {
        throw ContractViolation("piecewise envelope knots must have increasing times");
      }
    }
  }
  if (on_interval && !(on_interval->second > on_interval->first)) {
    throw ContractViolation("on_interval must satisfy start < stop");
  }
}

PulseEnvelope gaussian(double peak, double center, double width) {
  PulseEnvelope e;
  e.shape = Shape::Gaussian;
  e.peak_rabi = peak;
  e.center = center;
  e.width = width;
  return e;
}

void sample_pulses(const LevelScheme& scheme, const PulseTrain& train, double t,
                   std::vector<double>& out) {
  const int nt = scheme.transitions();
  if (static_cast<int>(train.envelopes.size()) != nt) {
    throw ContractViolation("pulse train has " + std::to_string(train.envelopes.size()) +
                            " envelopes for " + std::to_string(nt) + " transitions");
  }
  out.resize(nt);
  for (const auto& g : scheme.groups()) {
    const double v = train.envelopes[g.front()](t);
    for (int i : g) out[i] = v;
  }
}

std::vector<double> sample_pulses(const LevelScheme& scheme, const PulseTrain& train, double t) {
  std::vector<double> out;
  sample_pulses(scheme, train, t, out);
  return out;
}

double max_peak(const PulseTrain& train) {
  double m = 0.0;
  for (const auto& e : train.envelopes) m = std::max(m, e.peak_rabi);
  return m;
}

}  // namespace adtrans
