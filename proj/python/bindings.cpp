#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgo/beats.hpp"
#include "sgo/card.hpp"
#include "sgo/config.hpp"
#include "sgo/plate.hpp"
#include "sgo/resonance.hpp"
#include "sgo/specfun.hpp"

namespace py = pybind11;
using namespace sgo;

namespace {

py::dict report_dict(const resonance::ResonanceReport& rep) {
  py::dict d;
  d["tuned_parameter"] = rep.tuned_parameter;
  d["tuned_value"] = rep.tuned_value;
  d["target_nu_hz"] = rep.target_nu;
  d["nu_active_hz"] = rep.nu_active;
  d["nu_complement_hz"] = rep.nu_complement;
  d["mismatch"] = rep.mismatch;
  d["mode_index"] = rep.mode_index;
  d["asymptotic_prediction_m"] = rep.asymptotic_prediction;
  d["theta_at_root"] = rep.theta_at_root;
  py::list checks;
  for (const auto& c : rep.published_checks) {
    py::dict e;
    e["id"] = c.id;
    e["description"] = c.description;
    e["published"] = c.published;
    e["recomputed"] = c.recomputed;
    e["note"] = c.note;
    py::dict details;
    for (const auto& [k, v] : c.details) details[k.c_str()] = v;
    e["details"] = details;
    checks.append(e);
  }
  d["reference_checks"] = checks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sgo, m) {
  m.doc() = "resonance analysis of seismo-gravitational plate oscillations";

  // ---- special functions
  py::class_<specfun::BesselEval>(m, "BesselEval")
      .def_readonly("order", &specfun::BesselEval::order)
      .def_readonly("argument", &specfun::BesselEval::argument)
      .def_readonly("value", &specfun::BesselEval::value)
      .def_readonly("derivative", &specfun::BesselEval::derivative);
  m.def("bessel_j", &specfun::bessel_j, py::arg("order"), py::arg("z"));
  m.def("bessel_i", &specfun::bessel_i, py::arg("order"), py::arg("z"));
  m.def("bessel_i_scaled", &specfun::bessel_i_scaled, py::arg("order"), py::arg("z"));
  m.def("asymptotic_j", &specfun::asymptotic_j, py::arg("order"), py::arg("z"));
  m.def("asymptotic_j_valid", &specfun::asymptotic_j_valid, py::arg("order"),
        py::arg("z"));
  m.def("gamma_fn", &specfun::gamma_fn, py::arg("x"));

  // ---- plate model
  py::class_<plate::PlateSpec>(m, "PlateSpec")
      .def(py::init([](double young_modulus, double poisson, double density,
                       double thickness, double tension_q1) {
             plate::PlateSpec s{young_modulus, poisson, density, thickness, tension_q1};
             s.validate();
             return s;
           }),
           py::arg("young_modulus"), py::arg("poisson"), py::arg("density"),
           py::arg("thickness"), py::arg("tension_q1") = 0.0)
      .def_readwrite("young_modulus", &plate::PlateSpec::young_modulus)
      .def_readwrite("poisson", &plate::PlateSpec::poisson)
      .def_readwrite("density", &plate::PlateSpec::density)
      .def_readwrite("thickness", &plate::PlateSpec::thickness)
      .def_readwrite("tension_q1", &plate::PlateSpec::tension_q1)
      .def_property_readonly("d1", &plate::PlateSpec::d1)
      .def_property_readonly("rigidity", &plate::PlateSpec::rigidity);

  py::class_<plate::CircularGeometry>(m, "CircularGeometry")
      .def(py::init([](double epsilon, double outer_radius, double area) {
             plate::CircularGeometry g{epsilon, outer_radius, area};
             g.validate();
             return g;
           }),
           py::arg("epsilon"), py::arg("outer_radius") = 0.0, py::arg("area") = 0.0)
      .def_readwrite("epsilon", &plate::CircularGeometry::epsilon)
      .def_readwrite("outer_radius", &plate::CircularGeometry::outer_radius)
      .def_readwrite("area", &plate::CircularGeometry::area);

  m.def(
      "theta_from_omega",
      [](const plate::PlateSpec& s, double omega) {
        return plate::theta_from_omega(s, omega).theta;
      },
      py::arg("spec"), py::arg("omega"));
  m.def("omega_from_theta", &plate::omega_from_theta, py::arg("spec"), py::arg("theta"));
  m.def(
      "factorization_wavenumbers",
      [](const plate::PlateSpec& s, double omega) {
        const auto k = plate::factorization_wavenumbers(s, omega);
        return py::make_tuple(k.k_j, k.k_i);
      },
      py::arg("spec"), py::arg("omega"));
  m.def(
      "radial_mode",
      [](const plate::PlateSpec& s, const plate::CircularGeometry& g, double omega,
         double r) { return plate::radial_mode(s, g, plate::theta_from_omega(s, omega), r); },
      py::arg("spec"), py::arg("geometry"), py::arg("omega"), py::arg("r"));
  m.def(
      "dispersion_residual_active",
      [](const plate::PlateSpec& s, const plate::CircularGeometry& g, double omega) {
        return plate::dispersion_residual_active(s, g, plate::theta_from_omega(s, omega));
      },
      py::arg("spec"), py::arg("geometry"), py::arg("omega"));
  m.def("dispersion_residual_complement", &plate::dispersion_residual_complement,
        py::arg("spec"), py::arg("outer_radius"), py::arg("omega"));
  m.def("mode_energy", &plate::mode_energy, py::arg("nu"), py::arg("amplitude"),
        py::arg("area"), py::arg("thickness"), py::arg("density"));

  // ---- resonance tuning
  m.def("active_ground_frequency", &resonance::active_ground_frequency, py::arg("spec"),
        py::arg("geometry"), py::arg("nu_hint") = 0.0);
  m.def("complement_frequencies", &resonance::complement_frequencies, py::arg("spec"),
        py::arg("outer_radius"), py::arg("count"));
  m.def(
      "tune_outer_radius",
      [](const plate::PlateSpec& c, double target_nu, int l) {
        return report_dict(resonance::tune_outer_radius(c, target_nu, l));
      },
      py::arg("complement"), py::arg("target_nu"), py::arg("mode_l") = 1);
  m.def(
      "tune_tension",
      [](const plate::PlateSpec& s, const plate::CircularGeometry& g, double target_nu) {
        return report_dict(resonance::tune_tension(s, g, target_nu));
      },
      py::arg("active"), py::arg("geometry"), py::arg("target_nu"));
  m.def(
      "resonance_scan",
      [](const plate::PlateSpec& a, const plate::PlateSpec& c,
         const plate::CircularGeometry& g, const std::vector<double>& grid) {
        py::list rows;
        for (const auto& r : resonance::resonance_scan(a, c, g, grid)) {
          py::dict d;
          d["q1"] = r.q1;
          d["nu_eps_hz"] = r.nu_eps;
          d["nu_c_hz"] = r.nu_c;
          d["mismatch"] = r.mismatch;
          d["flagged"] = r.flagged;
          d["error"] = r.error;
          rows.append(d);
        }
        return rows;
      },
      py::arg("active"), py::arg("complement"), py::arg("geometry"), py::arg("q1_grid"));

  // ---- coupled oscillators
  py::class_<beats::OscillatorSystem>(m, "OscillatorSystem")
      .def(py::init([](double mass_small, double stiffness_small,
                       std::vector<double> masses_large,
                       std::vector<double> stiffnesses_large, std::vector<double> coupling) {
             beats::OscillatorSystem sys;
             sys.mass_small = mass_small;
             sys.stiffness_small = stiffness_small;
             sys.masses_large = std::move(masses_large);
             sys.stiffnesses_large = std::move(stiffnesses_large);
             sys.coupling = std::move(coupling);
             sys.validate();
             return sys;
           }),
           py::arg("mass_small"), py::arg("stiffness_small"), py::arg("masses_large"),
           py::arg("stiffnesses_large"), py::arg("coupling"))
      .def_readonly("mass_small", &beats::OscillatorSystem::mass_small)
      .def_readonly("stiffness_small", &beats::OscillatorSystem::stiffness_small)
      .def_property_readonly("mu", &beats::OscillatorSystem::mu)
      .def_static("from_bond_pair", &beats::OscillatorSystem::from_bond_pair,
                  py::arg("m"), py::arg("v"), py::arg("M"), py::arg("V"), py::arg("gamma"),
                  py::arg("Gamma"));

  m.def(
      "two_osc_exact_spectrum",
      [](double lm, double lM, double eps) {
        const auto s = beats::two_osc_exact_spectrum(lm, lM, eps);
        return py::make_tuple(s.lambda_plus, s.lambda_minus);
      },
      py::arg("lambda_m"), py::arg("lambda_M"), py::arg("eps"));
  m.def(
      "two_osc_approx_spectrum",
      [](double lm, double lM, double eps) {
        const auto a = beats::two_osc_approx_spectrum(lm, lM, eps);
        py::dict d;
        d["lambda_plus"] = a.lambda_plus;
        d["lambda_minus"] = a.lambda_minus;
        d["residual_plus"] = a.residual_plus;
        d["residual_minus"] = a.residual_minus;
        d["weak_coupling"] = a.weak_coupling;
        return d;
      },
      py::arg("lambda_m"), py::arg("lambda_M"), py::arg("eps"));
  m.def(
      "perturbed_spectrum",
      [](const beats::OscillatorSystem& sys) {
        const auto spec = beats::perturbed_spectrum(sys);
        py::dict d;
        d["eigenvalues"] = spec.eigenvalues;
        d["frequencies"] = spec.frequencies;
        d["modes"] = spec.modes;
        d["small_components"] = spec.small_components;
        return d;
      },
      py::arg("system"));
  m.def(
      "energy_series",
      [](const beats::OscillatorSystem& sys, double u0, double t1, std::size_t n) {
        const auto spec = beats::perturbed_spectrum(sys);
        beats::CauchyState init;
        init.u = u0;
        init.large.assign(sys.mu(), 0.0);
        init.large_dot.assign(sys.mu(), 0.0);
        const auto sol = beats::solve_cauchy(sys, spec, init);
        const auto es = beats::energy_series(sol, 0.0, t1, n);
        py::dict d;
        d["t"] = es.t;
        d["e_small"] = es.e_small;
        d["e_large"] = es.e_large;
        d["e_total"] = es.e_total;
        return d;
      },
      py::arg("system"), py::arg("u0"), py::arg("t1"), py::arg("n"));
  m.def(
      "transfer_coefficient",
      [](const beats::OscillatorSystem& sys, double energy, double horizon) {
        const auto r = beats::transfer_coefficient(sys, energy, horizon);
        py::dict d;
        d["k"] = r.k;
        d["beat_period"] = r.beat_period;
        d["horizon"] = r.horizon;
        return d;
      },
      py::arg("system"), py::arg("initial_energy") = 1.0, py::arg("horizon") = 0.0);
  m.def("optimal_window", &beats::optimal_window, py::arg("system"));
  m.def("windowed_average", &beats::windowed_average, py::arg("t"), py::arg("y"),
        py::arg("center"), py::arg("width"));

  // ---- time-spectral cards
  py::class_<card::SignalSeries>(m, "SignalSeries")
      .def_readonly("t0", &card::SignalSeries::t0)
      .def_readonly("dt", &card::SignalSeries::dt)
      .def_readonly("values", &card::SignalSeries::values);
  m.def(
      "synth_sgo",
      [](double duration_hours, const std::vector<std::tuple<double, double, double>>& modes,
         double dt_seconds, double noise_sigma, std::uint64_t seed) {
        std::vector<card::Mode> ms;
        for (const auto& [nu, amp, phase] : modes) ms.push_back(card::Mode{nu, amp, phase});
        return card::synth_sgo(duration_hours, ms, dt_seconds, noise_sigma, seed);
      },
      py::arg("duration_hours"), py::arg("modes"), py::arg("dt_seconds") = 60.0,
      py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);
  m.def("band_amplitude", &card::band_amplitude, py::arg("signal"), py::arg("f_lo_uhz"),
        py::arg("f_hi_uhz"), py::arg("window_start_s"), py::arg("window_hours"));
  m.def(
      "build_card",
      [](const card::SignalSeries& s, double bin_uhz, double window_hours,
         double stride_minutes, double f_lo, double f_hi) {
        const auto g = card::build_card(s, bin_uhz, window_hours, stride_minutes, f_lo, f_hi);
        py::dict d;
        d["window_centers_hours"] = g.window_centers_hours;
        d["bin_centers_uhz"] = g.bin_centers_uhz;
        d["a2"] = g.a2;
        d["isolines"] = g.isolines;
        d["bin_width_uhz"] = g.bin_width_uhz;
        return d;
      },
      py::arg("signal"), py::arg("bin_uhz") = 0.0, py::arg("window_hours") = 20.0,
      py::arg("stride_minutes") = 30.0, py::arg("f_lo_uhz") = 0.0,
      py::arg("f_hi_uhz") = 0.0);

  // exceptions surface as Python errors with the library's category names
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalError>(m, "NumericalError");
}
