#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgo/beats.hpp"
#include "sgo/card.hpp"
#include "sgo/plate.hpp"

namespace sgo::config {

/// Parsed `key = value...` file: order-preserving, repeated keys allowed.
/// Values are whitespace- or comma-separated numbers ("inf" accepted).
struct KeyValues {
  std::vector<std::pair<std::string, std::vector<double>>> entries;

  bool has(const std::string& key) const;
  /// Single-valued key; throws ConfigError when absent or not scalar.
  double scalar(const std::string& key) const;
  double scalar_or(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key) const;
  /// All rows carried by a repeated key.
  std::vector<std::vector<double>> rows(const std::string& key) const;
};

/// Strict parse: any key outside `allowed` is fatal.
KeyValues parse_key_values(const std::string& content,
                           const std::vector<std::string>& allowed,
                           const std::string& origin);

/// One plate plus its geometry and boundary data; the documented profile
/// schema (keys exactly: young_modulus, poisson, density, thickness,
/// tension_q1, epsilon, outer_radius, beta, resonance_nu).
struct PlateProfile {
  plate::PlateSpec spec;
  double epsilon = 0.0;
  double outer_radius = 0.0;
  double beta = 0.0;
  double resonance_nu = 0.0;

  plate::CircularGeometry geometry() const;
  plate::BoundaryBond bond() const;
};

PlateProfile parse_plate_profile(const std::string& content, const std::string& origin);
PlateProfile load_plate_profile(const std::string& path);

/// Built-in two-zone profile "paper-2015".
PlateProfile builtin_active_profile(const std::string& name);
PlateProfile builtin_complement_profile(const std::string& name);
bool is_builtin_profile(const std::string& name);

/// Oscillator config (keys: mass_small, stiffness_small, masses_large,
/// stiffnesses_large, coupling).
beats::OscillatorSystem parse_oscillator_config(const std::string& content,
                                                const std::string& origin);
beats::OscillatorSystem load_oscillator_config(const std::string& path);

/// Synthetic-signal config (keys: duration_hours, dt_seconds, mode (rows of
/// nu_uhz amplitude_m phase_rad), noise_sigma, seed).
struct SynthConfig {
  double duration_hours = 0.0;
  double dt_seconds = 60.0;
  std::vector<card::Mode> modes;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

SynthConfig parse_synth_config(const std::string& content, const std::string& origin);
SynthConfig load_synth_config(const std::string& path);

}  // namespace sgo::config
