#include "sgo/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgo/io.hpp"

namespace sgo::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, const std::string& origin) {
  std::string t = tok;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin + ": not a number: '" + tok + "'");
  }
}

}  // namespace

bool KeyValues::has(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return true;
  }
  return false;
}

double KeyValues::scalar(const std::string& key) const {
  const auto vals = list(key);
  if (vals.size() != 1) throw ConfigError("key '" + key + "' must carry a single value");
  return vals.front();
}

double KeyValues::scalar_or(const std::string& key, double fallback) const {
  return has(key) ? scalar(key) : fallback;
}

std::vector<double> KeyValues::list(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  throw ConfigError("missing required key '" + key + "'");
}

std::vector<std::vector<double>> KeyValues::rows(const std::string& key) const {
  std::vector<std::vector<double>> out;
  for (const auto& [k, v] : entries) {
    if (k == key) out.push_back(v);
  }
  return out;
}

KeyValues parse_key_values(const std::string& content,
                           const std::vector<std::string>& allowed,
                           const std::string& origin) {
  KeyValues kv;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    std::string rest = trim(line.substr(eq + 1));
    std::replace(rest.begin(), rest.end(), ',', ' ');
    std::istringstream toks(rest);
    std::vector<double> vals;
    std::string tok;
    while (toks >> tok) vals.push_back(parse_number(tok, origin));
    if (vals.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                        "' carries no value");
    }
    kv.entries.emplace_back(key, std::move(vals));
  }
  return kv;
}

plate::CircularGeometry PlateProfile::geometry() const {
  plate::CircularGeometry g;
  g.epsilon = epsilon;
  g.outer_radius = outer_radius;
  return g;
}

plate::BoundaryBond PlateProfile::bond() const {
  return plate::BoundaryBond{beta, epsilon};
}

namespace {

const std::vector<std::string> kPlateKeys = {
    "young_modulus", "poisson",      "density", "thickness",   "tension_q1",
    "epsilon",       "outer_radius", "beta",    "resonance_nu"};

}  // namespace

PlateProfile parse_plate_profile(const std::string& content, const std::string& origin) {
  const KeyValues kv = parse_key_values(content, kPlateKeys, origin);
  PlateProfile p;
  p.spec.young_modulus = kv.scalar("young_modulus");
  p.spec.poisson = kv.scalar("poisson");
  p.spec.density = kv.scalar("density");
  p.spec.thickness = kv.scalar("thickness");
  p.spec.tension_q1 = kv.scalar("tension_q1");
  p.epsilon = kv.scalar("epsilon");
  p.outer_radius = kv.scalar("outer_radius");
  p.beta = kv.scalar("beta");
  p.resonance_nu = kv.scalar("resonance_nu");
  p.spec.validate();
  return p;
}

PlateProfile load_plate_profile(const std::string& path) {
  return parse_plate_profile(io::read_file(path), path);
}

bool is_builtin_profile(const std::string& name) { return name == "paper-2015"; }

PlateProfile builtin_active_profile(const std::string& name) {
  if (!is_builtin_profile(name)) throw ConfigError("unknown profile '" + name + "'");
  PlateProfile p;
  p.spec.young_modulus = 17.28e10;
  p.spec.poisson = 0.28;
  p.spec.density = 3380.0;
  p.spec.thickness = 3e4;
  p.spec.tension_q1 = 3e9;
  p.epsilon = 2.6e5;
  p.outer_radius = 5e6;
  p.beta = std::numeric_limits<double>::infinity();
  p.resonance_nu = 2e-4;
  return p;
}

PlateProfile builtin_complement_profile(const std::string& name) {
  PlateProfile p = builtin_active_profile(name);
  p.spec.thickness = 1e5;
  p.spec.tension_q1 = 0.0;
  return p;
}

beats::OscillatorSystem parse_oscillator_config(const std::string& content,
                                                const std::string& origin) {
  const KeyValues kv = parse_key_values(
      content,
      {"mass_small", "stiffness_small", "masses_large", "stiffnesses_large", "coupling"},
      origin);
  beats::OscillatorSystem sys;
  sys.mass_small = kv.scalar("mass_small");
  sys.stiffness_small = kv.scalar("stiffness_small");
  sys.masses_large = kv.list("masses_large");
  sys.stiffnesses_large = kv.list("stiffnesses_large");
  sys.coupling = kv.list("coupling");
  sys.validate();
  return sys;
}

beats::OscillatorSystem load_oscillator_config(const std::string& path) {
  return parse_oscillator_config(io::read_file(path), path);
}

SynthConfig parse_synth_config(const std::string& content, const std::string& origin) {
  const KeyValues kv = parse_key_values(
      content, {"duration_hours", "dt_seconds", "mode", "noise_sigma", "seed"}, origin);
  SynthConfig c;
  c.duration_hours = kv.scalar("duration_hours");
  c.dt_seconds = kv.scalar_or("dt_seconds", 60.0);
  c.noise_sigma = kv.scalar_or("noise_sigma", 0.0);
  const double seed = kv.scalar_or("seed", 0.0);
  if (seed < 0.0 || seed != std::floor(seed)) {
    throw ConfigError(origin + ": seed must be a non-negative integer");
  }
  c.seed = static_cast<std::uint64_t>(seed);
  for (const auto& row : kv.rows("mode")) {
    if (row.size() != 3) {
      throw ConfigError(origin + ": mode rows are 'nu_uhz amplitude_m phase_rad'");
    }
    c.modes.push_back(card::Mode{row[0], row[1], row[2]});
  }
  return c;
}

SynthConfig load_synth_config(const std::string& path) {
  return parse_synth_config(io::read_file(path), path);
}

}  // namespace sgo::config
