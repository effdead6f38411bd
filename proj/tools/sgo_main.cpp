// sgo: dispersion analysis, resonance tuning, oscillator beats, and
// time-spectral cards for seismo-gravitational plate oscillations.
//
// Every run resolves its configuration, writes the declared outputs plus a
// manifest echoing the resolved parameters into one run directory, and is
// reproducible byte-for-byte from that manifest via `sgo rerun`.

#include <algorithm>
#include <clocale>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgo/beats.hpp"
#include "sgo/card.hpp"
#include "sgo/config.hpp"
#include "sgo/errors.hpp"
#include "sgo/io.hpp"
#include "sgo/parallel.hpp"
#include "sgo/plate.hpp"
#include "sgo/resonance.hpp"
#include "sgo/specfun.hpp"

namespace fs = std::filesystem;
using sgo::io::JsonWriter;

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

struct CommonOpts {
  std::string out_dir;      // explicit run directory; overrides the root
  std::string output_root;  // default root for generated run directories
  unsigned threads = 0;
};

// Parameter sets are stored flat in the manifest; rerun rebuilds them 1:1.
using Params = std::vector<std::pair<std::string, std::string>>;

std::string params_get(const Params& p, const std::string& key) {
  for (const auto& [k, v] : p) {
    if (k == key) return v;
  }
  throw sgo::ConfigError("manifest: missing parameter '" + key + "'");
}

double params_num(const Params& p, const std::string& key) {
  return std::stod(params_get(p, key));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

fs::path make_run_dir(const CommonOpts& common, const std::string& subcommand,
                      const Params& params) {
  if (!common.out_dir.empty()) {
    fs::create_directories(common.out_dir);
    return common.out_dir;
  }
  std::string root = common.output_root;
  if (root.empty()) {
    if (const char* env = std::getenv("SGO_OUTPUT_ROOT")) root = env;
  }
  if (root.empty()) root = "runs";
  std::string blob = subcommand;
  for (const auto& [k, v] : params) blob += "|" + k + "=" + v;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%08llx",
                static_cast<unsigned long long>(fnv1a(blob) & 0xffffffffull));
  const fs::path dir = fs::path(root) / (subcommand + "-" + utc_stamp() + "-" + hash);
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const Params& params) {
  JsonWriter jw;
  jw.begin_object();
  jw.key("tool").value("sgo");
  jw.key("subcommand").value(subcommand);
  jw.key("params").begin_object();
  for (const auto& [k, v] : params) jw.key(k).value(v);
  jw.end_object();
  jw.end_object();
  sgo::io::write_file((dir / "manifest.json").string(), jw.str() + "\n");
}

struct TwoZone {
  sgo::config::PlateProfile active;
  sgo::config::PlateProfile complement;
};

TwoZone resolve_zones(const std::string& profile, const std::string& active_config,
                      const std::string& complement_config) {
  TwoZone z;
  bool have_active = false, have_complement = false;
  if (!profile.empty()) {
    z.active = sgo::config::builtin_active_profile(profile);
    z.complement = sgo::config::builtin_complement_profile(profile);
    have_active = have_complement = true;
  }
  if (!active_config.empty()) {
    z.active = sgo::config::load_plate_profile(active_config);
    have_active = true;
  }
  if (!complement_config.empty()) {
    z.complement = sgo::config::load_plate_profile(complement_config);
    have_complement = true;
  }
  if (!have_active || !have_complement) {
    throw sgo::ConfigError(
        "need --profile, or both --active-config and --complement-config");
  }
  return z;
}

sgo::plate::CircularGeometry zone_geometry(const TwoZone& z) {
  sgo::plate::CircularGeometry g;
  g.epsilon = z.active.epsilon;
  g.outer_radius = z.complement.outer_radius;
  return g;
}

void emit_checks(JsonWriter& jw, const std::vector<sgo::resonance::DiscrepancyCheck>& checks) {
  jw.key("reference_checks").begin_array();
  for (const auto& c : checks) {
    jw.begin_object();
    jw.key("id").value(c.id);
    jw.key("description").value(c.description);
    jw.key("published").value(c.published);
    jw.key("recomputed").value(c.recomputed);
    jw.key("note").value(c.note);
    jw.key("details").begin_object();
    for (const auto& [k, v] : c.details) jw.key(k).value(v);
    jw.end_object();
    jw.end_object();
  }
  jw.end_array();
}

std::string report_json(const sgo::resonance::ResonanceReport& rep) {
  JsonWriter jw;
  jw.begin_object();
  jw.key("tuned_parameter").value(rep.tuned_parameter);
  jw.key("tuned_value").value(rep.tuned_value);
  jw.key("target_nu_hz").value(rep.target_nu);
  jw.key("nu_active_hz").value(rep.nu_active);
  jw.key("nu_complement_hz").value(rep.nu_complement);
  jw.key("mismatch").value(rep.mismatch);
  jw.key("mode_index").value(rep.mode_index);
  if (rep.tuned_parameter == "outer_radius") {
    jw.key("asymptotic_prediction_m").value(rep.asymptotic_prediction);
    // the radius as published, carried for reference only
    jw.key("published_outer_radius_m").value(5e6);
  } else {
    jw.key("theta_at_root").value(rep.theta_at_root);
  }
  emit_checks(jw, rep.published_checks);
  jw.end_object();
  return jw.str() + "\n";
}

// ---------------------------------------------------------------- subcommands

int run_tune(const CommonOpts& common, const Params& params) {
  const TwoZone z = resolve_zones(params_get(params, "profile"),
                                  params_get(params, "active_config"),
                                  params_get(params, "complement_config"));
  const std::string what = params_get(params, "param");
  double target = params_num(params, "target_nu");
  if (target <= 0.0) target = z.active.resonance_nu;
  const int mode_l = static_cast<int>(params_num(params, "mode_l"));
  const auto geom = zone_geometry(z);

  sgo::resonance::ResonanceReport rep;
  if (what == "radius") {
    rep = sgo::resonance::tune_outer_radius(z.complement.spec, target, mode_l,
                                            &z.active.spec, &geom);
  } else if (what == "q1") {
    rep = sgo::resonance::tune_tension(z.active.spec, geom, target, &z.complement.spec);
  } else {
    throw sgo::ConfigError("tune: --param must be 'radius' or 'q1'");
  }

  const fs::path dir = make_run_dir(common, "tune", params);
  sgo::io::write_file((dir / "tune_report.json").string(), report_json(rep));
  write_manifest(dir, "tune", params);
  std::cout << "tune: " << rep.tuned_parameter << " = " << sgo::io::format_g17(rep.tuned_value)
            << " (target " << sgo::io::format_g17(target) << " Hz, mismatch "
            << sgo::io::format_g17(rep.mismatch) << ")\n"
            << "run dir: " << dir.string() << "\n";
  return 0;
}

int run_scan(const CommonOpts& common, const Params& params) {
  const TwoZone z = resolve_zones(params_get(params, "profile"),
                                  params_get(params, "active_config"),
                                  params_get(params, "complement_config"));
  const double q1_min = params_num(params, "q1_min");
  const double q1_max = params_num(params, "q1_max");
  const int points = static_cast<int>(params_num(params, "points"));
  if (points < 1 || q1_min < 0 || q1_max < q1_min) {
    throw sgo::ConfigError("scan: need 0 <= q1_min <= q1_max and points >= 1");
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = (points == 1)
                  ? q1_min
                  : q1_min + (q1_max - q1_min) * static_cast<double>(i) / (points - 1);
  }
  const auto geom = zone_geometry(z);
  const auto rows =
      sgo::resonance::resonance_scan(z.active.spec, z.complement.spec, geom, grid,
                                     common.threads);

  sgo::io::CsvWriter csv({"q1", "nu_eps_hz", "nu_c_hz", "mismatch", "flagged"});
  for (const auto& r : rows) {
    csv.add_row({r.q1, r.nu_eps, r.nu_c, r.mismatch, r.flagged ? 1.0 : 0.0});
  }

  JsonWriter jw;
  jw.begin_object();
  jw.key("rows").value(static_cast<std::int64_t>(rows.size()));
  jw.key("flagged").begin_array();
  for (const auto& r : rows) {
    if (r.flagged) jw.value(r.q1);
  }
  jw.end_array();
  jw.key("row_errors").begin_array();
  for (const auto& r : rows) {
    if (!r.error.empty()) jw.value(r.error);
  }
  jw.end_array();
  emit_checks(jw, sgo::resonance::published_value_checks(
                      z.active.spec, z.complement.spec, geom, z.active.resonance_nu));
  jw.end_object();

  const fs::path dir = make_run_dir(common, "scan", params);
  sgo::io::write_file((dir / "scan.csv").string(), csv.str());
  sgo::io::write_file((dir / "scan_report.json").string(), jw.str() + "\n");
  write_manifest(dir, "scan", params);
  std::cout << "scan: " << rows.size() << " rows\nrun dir: " << dir.string() << "\n";
  return 0;
}

int run_dispersion(const CommonOpts& common, const Params& params) {
  const TwoZone z = resolve_zones(params_get(params, "profile"),
                                  params_get(params, "active_config"),
                                  params_get(params, "complement_config"));
  const std::string zone = params_get(params, "zone");
  const double nu_min = params_num(params, "nu_min");
  const double nu_max = params_num(params, "nu_max");
  const int points = static_cast<int>(params_num(params, "points"));
  if (!(nu_min > 0) || !(nu_max > nu_min) || points < 2) {
    throw sgo::ConfigError("dispersion: need 0 < nu_min < nu_max, points >= 2");
  }
  const auto geom = zone_geometry(z);

  std::function<double(double)> residual;
  if (zone == "active") {
    residual = [&](double omega) {
      return sgo::plate::dispersion_residual_active(
          z.active.spec, geom, sgo::plate::theta_from_omega(z.active.spec, omega));
    };
  } else if (zone == "complement") {
    residual = [&](double omega) {
      return sgo::plate::dispersion_residual_complement(z.complement.spec,
                                                        geom.outer_radius, omega);
    };
  } else {
    throw sgo::ConfigError("dispersion: --zone must be 'active' or 'complement'");
  }

  sgo::io::CsvWriter csv({"nu_hz", "omega_rad_s", "theta", "residual"});
  for (int i = 0; i < points; ++i) {
    const double nu = nu_min + (nu_max - nu_min) * static_cast<double>(i) / (points - 1);
    const double omega = kTwoPi * nu;
    double theta = 0.0, res = std::numeric_limits<double>::quiet_NaN();
    try {
      theta = (zone == "active")
                  ? sgo::plate::theta_from_omega(z.active.spec, omega).theta
                  : 0.0;
      res = residual(omega);
    } catch (const sgo::NumericalError&) {
      // pole row stays NaN
    }
    csv.add_row({nu, omega, theta, res});
  }

  std::vector<double> roots_nu;
  try {
    sgo::resonance::RootFindOptions opts;
    opts.threads = common.threads;
    const auto roots = sgo::resonance::find_roots(residual, kTwoPi * nu_min,
                                                  kTwoPi * nu_max, opts);
    for (double w : roots) roots_nu.push_back(w / kTwoPi);
  } catch (const sgo::NoRootError&) {
    // an empty scan is a result, not a failure
  }
  JsonWriter jw;
  jw.begin_object();
  jw.key("zone").value(zone);
  jw.key("roots_nu_hz").begin_array();
  for (double r : roots_nu) jw.value(r);
  jw.end_array();
  jw.end_object();

  const fs::path dir = make_run_dir(common, "dispersion", params);
  sgo::io::write_file((dir / "dispersion.csv").string(), csv.str());
  sgo::io::write_file((dir / "roots.json").string(), jw.str() + "\n");
  write_manifest(dir, "dispersion", params);
  std::cout << "dispersion: " << roots_nu.size() << " roots in [" << nu_min << ", "
            << nu_max << "] Hz\nrun dir: " << dir.string() << "\n";
  return 0;
}

int run_beats(const CommonOpts& common, const Params& params) {
  const auto sys = sgo::config::load_oscillator_config(params_get(params, "config"));
  const double u0 = params_num(params, "u0");
  double duration = params_num(params, "duration");
  int points = static_cast<int>(params_num(params, "points"));

  const auto spectrum = sgo::beats::perturbed_spectrum(sys);
  sgo::beats::CauchyState init;
  init.u = u0;
  init.large.assign(sys.mu(), 0.0);
  init.large_dot.assign(sys.mu(), 0.0);
  const auto sol = sgo::beats::solve_cauchy(sys, spectrum, init);

  if (duration <= 0.0) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < spectrum.frequencies.size(); ++s) {
      gap = std::min(gap, spectrum.frequencies[s + 1] - spectrum.frequencies[s]);
    }
    duration = std::isfinite(gap) && gap > 0.0 ? 3.0 * kTwoPi / gap
                                               : 100.0 * kTwoPi / spectrum.frequencies[0];
  }
  if (points <= 0) {
    const double t_fast = kTwoPi / spectrum.frequencies.back();
    points = static_cast<int>(std::min(200000.0, std::max(2048.0, 40.0 * duration / t_fast)));
  }
  const auto series = sgo::beats::energy_series(sol, 0.0, duration,
                                                static_cast<std::size_t>(points));

  JsonWriter jw;
  jw.begin_object();
  jw.key("eigenvalues").begin_array();
  for (double v : spectrum.eigenvalues) jw.value(v);
  jw.end_array();
  jw.key("frequencies_rad_s").begin_array();
  for (double v : spectrum.frequencies) jw.value(v);
  jw.end_array();
  jw.key("modes").begin_array();
  for (const auto& mode : spectrum.modes) {
    jw.begin_array();
    for (double v : mode) jw.value(v);
    jw.end_array();
  }
  jw.end_array();
  jw.key("small_components").begin_array();
  for (double v : spectrum.small_components) jw.value(v);
  jw.end_array();
  jw.key("amplitudes").begin_array();
  for (double v : sol.amplitudes) jw.value(v);
  jw.end_array();
  jw.key("phases").begin_array();
  for (double v : sol.phases) jw.value(v);
  jw.end_array();
  jw.end_object();

  sgo::io::CsvWriter csv({"t", "e_small", "e_large", "e_total", "xi_re", "xi_im"});
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    csv.add_row({series.t[i], series.e_small[i], series.e_large[i], series.e_total[i],
                 series.xi[i].real(), series.xi[i].imag()});
  }

  const fs::path dir = make_run_dir(common, "beats", params);
  sgo::io::write_file((dir / "spectrum.json").string(), jw.str() + "\n");
  sgo::io::write_file((dir / "energy.csv").string(), csv.str());
  write_manifest(dir, "beats", params);
  std::cout << "beats: " << spectrum.eigenvalues.size() << " modes, " << series.t.size()
            << " samples over " << sgo::io::format_g17(duration) << " s\nrun dir: "
            << dir.string() << "\n";
  return 0;
}

int run_transfer(const CommonOpts& common, const Params& params) {
  const auto sys = sgo::config::load_oscillator_config(params_get(params, "config"));
  if (sys.mu() != 1) throw sgo::ConfigError("transfer: detuning sweep needs mu = 1");
  const double detuning_max = params_num(params, "detuning_max");
  const int points = static_cast<int>(params_num(params, "points"));
  const double energy = params_num(params, "energy");
  if (points < 2 || !(detuning_max > 0)) {
    throw sgo::ConfigError("transfer: need points >= 2 and detuning_max > 0");
  }

  const double lambda1 = sys.lambda_small();
  std::vector<std::pair<double, double>> rows(static_cast<std::size_t>(points));
  sgo::parallel_for(
      rows.size(),
      [&](std::size_t i) {
        const double x = detuning_max * static_cast<double>(i) / (points - 1);
        sgo::beats::OscillatorSystem detuned = sys;
        detuned.stiffnesses_large[0] =
            detuned.masses_large[0] * lambda1 * (1.0 + x) * (1.0 + x);
        rows[i] = {x, sgo::beats::transfer_coefficient(detuned, energy).k};
      },
      common.threads);
  sgo::io::CsvWriter csv({"detuning", "k"});
  for (const auto& [x, k] : rows) csv.add_row({x, k});

  const fs::path dir = make_run_dir(common, "transfer", params);
  sgo::io::write_file((dir / "transfer.csv").string(), csv.str());
  write_manifest(dir, "transfer", params);
  std::cout << "transfer: " << points << " detuning points\nrun dir: " << dir.string()
            << "\n";
  return 0;
}

int run_synth(const CommonOpts& common, const Params& params) {
  const auto cfg = sgo::config::load_synth_config(params_get(params, "config"));
  const auto signal = sgo::card::synth_sgo(cfg.duration_hours, cfg.modes, cfg.dt_seconds,
                                           cfg.noise_sigma, cfg.seed);
  const fs::path dir = make_run_dir(common, "synth", params);
  sgo::io::write_file((dir / "signal.csv").string(), sgo::card::signal_csv(signal));
  write_manifest(dir, "synth", params);
  std::cout << "synth: " << signal.values.size() << " samples\nrun dir: " << dir.string()
            << "\n";
  return 0;
}

int run_card(const CommonOpts& common, const Params& params) {
  sgo::card::SignalSeries signal;
  const std::string input = params_get(params, "input");
  const std::string synth = params_get(params, "synth");
  if (!input.empty()) {
    signal = sgo::card::parse_signal_csv(sgo::io::read_file(input));
  } else if (!synth.empty()) {
    const auto cfg = sgo::config::load_synth_config(synth);
    signal = sgo::card::synth_sgo(cfg.duration_hours, cfg.modes, cfg.dt_seconds,
                                  cfg.noise_sigma, cfg.seed);
  } else {
    throw sgo::ConfigError("card: need --input signal.csv or --synth synth.cfg");
  }
  const auto grid = sgo::card::build_card(
      signal, params_num(params, "bin_uhz"), params_num(params, "window_hours"),
      params_num(params, "stride_minutes"), params_num(params, "fmin_uhz"),
      params_num(params, "fmax_uhz"), common.threads);

  const fs::path dir = make_run_dir(common, "card", params);
  sgo::io::write_file((dir / "card.csv").string(), sgo::card::card_csv(grid));
  sgo::io::write_file((dir / "card_meta.json").string(), sgo::card::card_meta_json(grid));
  if (params_get(params, "svg") == "1") {
    sgo::io::write_file((dir / "card.svg").string(), sgo::card::card_svg(grid));
  }
  write_manifest(dir, "card", params);
  std::cout << "card: " << grid.bin_centers_uhz.size() << " bins x "
            << grid.window_centers_hours.size() << " windows\nrun dir: " << dir.string()
            << "\n";
  return 0;
}

int run_dump_specfun(const CommonOpts& common, const Params& params) {
  std::vector<double> orders;
  {
    std::string spec = params_get(params, "orders");
    std::replace(spec.begin(), spec.end(), ',', ' ');
    std::istringstream in(spec);
    double p;
    while (in >> p) orders.push_back(p);
  }
  if (orders.empty()) throw sgo::ConfigError("dump-specfun: no orders given");
  const double z_min = params_num(params, "z_min");
  const double z_max = params_num(params, "z_max");
  const int points = static_cast<int>(params_num(params, "points"));
  if (!(z_min >= 0) || !(z_max > z_min) || points < 2) {
    throw sgo::ConfigError("dump-specfun: need 0 <= z_min < z_max, points >= 2");
  }
  sgo::io::CsvWriter csv({"p", "z", "Jp", "Jp_prime", "Ip", "Ip_prime"});
  for (double p : orders) {
    for (int i = 0; i < points; ++i) {
      const double zv = z_min + (z_max - z_min) * static_cast<double>(i) / (points - 1);
      const auto j = sgo::specfun::bessel_j(p, zv);
      const auto ii = sgo::specfun::bessel_i(p, zv);
      csv.add_row({p, zv, j.value, j.derivative, ii.value, ii.derivative});
    }
  }
  const fs::path dir = make_run_dir(common, "dump-specfun", params);
  sgo::io::write_file((dir / "specfun.csv").string(), csv.str());
  write_manifest(dir, "dump-specfun", params);
  std::cout << "dump-specfun: " << orders.size() << " orders x " << points
            << " points\nrun dir: " << dir.string() << "\n";
  return 0;
}

int dispatch(const std::string& subcommand, const CommonOpts& common, const Params& params) {
  if (subcommand == "tune") return run_tune(common, params);
  if (subcommand == "scan") return run_scan(common, params);
  if (subcommand == "dispersion") return run_dispersion(common, params);
  if (subcommand == "beats") return run_beats(common, params);
  if (subcommand == "transfer") return run_transfer(common, params);
  if (subcommand == "card") return run_card(common, params);
  if (subcommand == "synth") return run_synth(common, params);
  if (subcommand == "dump-specfun") return run_dump_specfun(common, params);
  throw sgo::ConfigError("unknown subcommand in manifest: '" + subcommand + "'");
}

int run_rerun(const CommonOpts& common, const std::string& manifest_path) {
  // ordered parsing keeps the rerun manifest byte-identical to the original
  const auto doc = nlohmann::ordered_json::parse(sgo::io::read_file(manifest_path));
  if (!doc.contains("subcommand") || !doc.contains("params")) {
    throw sgo::ConfigError("manifest: missing subcommand or params");
  }
  Params params;
  for (const auto& [k, v] : doc.at("params").items()) {
    params.emplace_back(k, v.get<std::string>());
  }
  return dispatch(doc.at("subcommand").get<std::string>(), common, params);
}

std::string fmt_num(double v) { return sgo::io::format_g17(v); }

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"resonance analysis of seismo-gravitational plate oscillations"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--out-dir", common.out_dir, "explicit run directory");
  app.add_option("--output-root", common.output_root,
                 "root for generated run directories (default $SGO_OUTPUT_ROOT or ./runs)");
  app.add_option("--threads", common.threads, "worker cap, 0 = hardware parallelism");

  // shared plate options
  std::string profile, active_config, complement_config;
  auto add_zone_opts = [&](CLI::App* cmd) {
    cmd->add_option("--profile", profile, "built-in two-zone profile (paper-2015)");
    cmd->add_option("--active-config", active_config, "active-zone plate profile file");
    cmd->add_option("--complement-config", complement_config,
                    "complement plate profile file");
  };

  auto* tune = app.add_subcommand("tune", "tune outer radius or compression to a target");
  std::string tune_param = "radius";
  double target_nu = 0.0;
  int mode_l = 1;
  add_zone_opts(tune);
  tune->add_option("--param", tune_param, "'radius' or 'q1'");
  tune->add_option("--target-nu", target_nu, "target frequency, Hz (default: profile)");
  tune->add_option("--mode-l", mode_l, "complement mode index l");

  auto* scan = app.add_subcommand("scan", "sweep Q1 and tabulate resonance mismatch");
  double q1_min = 1e9, q1_max = 3e9;
  int scan_points = 9;
  add_zone_opts(scan);
  scan->add_option("--q1-min", q1_min, "lowest Q1, kg/(m s^2)");
  scan->add_option("--q1-max", q1_max, "highest Q1");
  scan->add_option("--points", scan_points, "grid points");

  auto* dispersion = app.add_subcommand("dispersion", "residual scan and roots over nu");
  std::string zone = "active";
  double nu_min = 1e-5, nu_max = 2e-3;
  int disp_points = 512;
  add_zone_opts(dispersion);
  dispersion->add_option("--zone", zone, "'active' or 'complement'");
  dispersion->add_option("--nu-min", nu_min, "Hz");
  dispersion->add_option("--nu-max", nu_max, "Hz");
  dispersion->add_option("--points", disp_points, "scan points");

  auto* beats_cmd = app.add_subcommand("beats", "modal evolution and energy series");
  std::string osc_config;
  double beats_u0 = 1.0, beats_duration = 0.0;
  int beats_points = 0;
  beats_cmd->add_option("--config", osc_config, "oscillator system file")->required();
  beats_cmd->add_option("--u0", beats_u0, "initial small-oscillator displacement");
  beats_cmd->add_option("--duration", beats_duration, "simulated span, s (0 = 3 beats)");
  beats_cmd->add_option("--points", beats_points, "samples (0 = auto)");

  auto* transfer = app.add_subcommand("transfer", "transfer coefficient vs detuning");
  std::string transfer_config;
  double detuning_max = 0.05, transfer_energy = 1.0;
  int transfer_points = 10;
  transfer->add_option("--config", transfer_config, "oscillator system file")->required();
  transfer->add_option("--detuning-max", detuning_max, "relative frequency detuning limit");
  transfer->add_option("--points", transfer_points, "grid points");
  transfer->add_option("--energy", transfer_energy, "initial small-oscillator energy, J");

  auto* card_cmd = app.add_subcommand("card", "time-spectral card from a signal");
  std::string card_input, card_synth;
  double window_hours = 20.0, stride_minutes = 30.0, bin_uhz = 0.0, fmin_uhz = 0.0,
         fmax_uhz = 0.0;
  bool svg = true;
  card_cmd->add_option("--input", card_input, "signal CSV (t_seconds, displacement_m)");
  card_cmd->add_option("--synth", card_synth, "synthetic-signal config file");
  card_cmd->add_option("--window-hours", window_hours, "window length");
  card_cmd->add_option("--stride-minutes", stride_minutes, "window shift");
  card_cmd->add_option("--bin-uhz", bin_uhz, "band width (0 = one DFT bin)");
  card_cmd->add_option("--fmin-uhz", fmin_uhz, "lowest band edge");
  card_cmd->add_option("--fmax-uhz", fmax_uhz, "highest band edge (0 = Nyquist)");
  card_cmd->add_flag("--svg,!--no-svg", svg, "emit the grayscale heat map");

  auto* synth = app.add_subcommand("synth", "write a synthetic displacement record");
  std::string synth_config;
  synth->add_option("--config", synth_config, "synthetic-signal config file")->required();

  auto* dump = app.add_subcommand("dump-specfun", "diagnostic Bessel table");
  std::string orders = "0,0.5,1";
  double z_min = 0.1, z_max = 30.0;
  int dump_points = 120;
  dump->add_option("--orders", orders, "comma-separated orders");
  dump->add_option("--z-min", z_min, "");
  dump->add_option("--z-max", z_max, "");
  dump->add_option("--points", dump_points, "");

  auto* rerun = app.add_subcommand("rerun", "reproduce a run from its manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "path to manifest.json")->required();

  for (CLI::App* sc : {tune, scan, dispersion, beats_cmd, transfer, card_cmd, synth, dump,
                       rerun}) {
    sc->fallthrough();  // --out-dir and friends live on the parent app
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (rerun->parsed()) return run_rerun(common, manifest_path);

    Params params;
    std::string subcommand;
    if (tune->parsed()) {
      subcommand = "tune";
      params = {{"profile", profile},
                {"active_config", active_config},
                {"complement_config", complement_config},
                {"param", tune_param},
                {"target_nu", fmt_num(target_nu)},
                {"mode_l", std::to_string(mode_l)}};
    } else if (scan->parsed()) {
      subcommand = "scan";
      params = {{"profile", profile},
                {"active_config", active_config},
                {"complement_config", complement_config},
                {"q1_min", fmt_num(q1_min)},
                {"q1_max", fmt_num(q1_max)},
                {"points", std::to_string(scan_points)}};
    } else if (dispersion->parsed()) {
      subcommand = "dispersion";
      params = {{"profile", profile},
                {"active_config", active_config},
                {"complement_config", complement_config},
                {"zone", zone},
                {"nu_min", fmt_num(nu_min)},
                {"nu_max", fmt_num(nu_max)},
                {"points", std::to_string(disp_points)}};
    } else if (beats_cmd->parsed()) {
      subcommand = "beats";
      params = {{"config", osc_config},
                {"u0", fmt_num(beats_u0)},
                {"duration", fmt_num(beats_duration)},
                {"points", std::to_string(beats_points)}};
    } else if (transfer->parsed()) {
      subcommand = "transfer";
      params = {{"config", transfer_config},
                {"detuning_max", fmt_num(detuning_max)},
                {"points", std::to_string(transfer_points)},
                {"energy", fmt_num(transfer_energy)}};
    } else if (card_cmd->parsed()) {
      subcommand = "card";
      params = {{"input", card_input},
                {"synth", card_synth},
                {"window_hours", fmt_num(window_hours)},
                {"stride_minutes", fmt_num(stride_minutes)},
                {"bin_uhz", fmt_num(bin_uhz)},
                {"fmin_uhz", fmt_num(fmin_uhz)},
                {"fmax_uhz", fmt_num(fmax_uhz)},
                {"svg", svg ? "1" : "0"}};
    } else if (synth->parsed()) {
      subcommand = "synth";
      params = {{"config", synth_config}};
    } else if (dump->parsed()) {
      subcommand = "dump-specfun";
      params = {{"orders", orders},
                {"z_min", fmt_num(z_min)},
                {"z_max", fmt_num(z_max)},
                {"points", std::to_string(dump_points)}};
    }
    return dispatch(subcommand, common, params);
  } catch (const sgo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sgo::NumericalError& e) {
    JsonWriter jw;
    jw.begin_object();
    jw.key("error").begin_object();
    jw.key("type").value("numerical");
    jw.key("message").value(e.what());
    jw.end_object();
    jw.end_object();
    std::cout << jw.str() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
