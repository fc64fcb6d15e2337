#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adtrans/propagation.hpp"
#include "adtrans/scenario.hpp"

namespace adtrans {

/// Mixing-angle entrance for M runs: Omega_odd^2 = Omega0^2 sin^2 theta0,
/// Omega_even^2 = Omega0^2 cos^2 theta0 with Omega0^2 = peak^2 exp(-(tau/width)^2).
///
///   tanh:   amplitude (1 + tanh((tau - center)/ramp)) / 2
///   erf:    amplitude (1 + erf((tau - center)/ramp)) / 2
///   sin2:   amplitude sin^2(pi (tau - center + ramp) / (4 ramp)) on |tau - center| < ramp
struct MixingEntrance {
  std::string profile = "tanh";
  double amplitude = 1.5707963267948966;
  double center = 0.0;
  double ramp = 1.0;
  double peak = 10.0;
  double width = 3.0;

  Profile theta0() const;
  Profile omega0_sq() const;
  friend bool operator==(const MixingEntrance&, const MixingEntrance&) = default;
};

struct PropagationConfig {
  std::string model = "reduced";  // "reduced" or "transport"
  std::string closure;            // regime supplying the populations; empty: scenario regime
  MediumParams medium;
  PropagationGrid grid;
  std::vector<std::pair<int, int>> invariant_pairs;  // 0-based transitions
  std::optional<MixingEntrance> mixing;               // otherwise Omega_i^2 = envelope_i^2
};

/// A parsed scenario file: the single-atom scenario plus the optional
/// propagation block.
struct RunConfig {
  Scenario scenario;
  std::optional<PropagationConfig> propagation;
};

/// YAML scenario file. Levels, transitions and degeneracy members are
/// 1-based in the file. Throws ConfigError with key path and line for
/// unknown keys, wrong types and invalid values.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<text>");

/// "M", "W" or "" by chain orientation.
std::string system_kind(const LevelScheme& scheme);

/// Entrance fields of the reduced model derived from the run configuration.
EntranceFields entrance_fields(const RunConfig& config);

/// Shipped scenario files, resolved against the install or source tree.
std::filesystem::path scenario_dir();

}  // namespace adtrans
