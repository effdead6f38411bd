#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sgo/beats.hpp"

using namespace sgo;
using namespace sgo::beats;

namespace {

constexpr double kPi = 3.14159265358979323846;

OscillatorSystem pair_system(double v, double V, double b, double m = 1.0, double M = 1.0) {
  OscillatorSystem sys;
  sys.mass_small = m;
  sys.stiffness_small = v;
  sys.masses_large = {M};
  sys.stiffnesses_large = {V};
  sys.coupling = {b};
  return sys;
}

// the detuned weak pair used throughout the section-5 window analysis
OscillatorSystem window_system() { return pair_system(1.0, 1.21, 0.02); }

CauchyState rest_state(std::size_t mu, double u0) {
  CauchyState s;
  s.u = u0;
  s.large.assign(mu, 0.0);
  s.large_dot.assign(mu, 0.0);
  return s;
}

OscillatorSystem random_system(std::mt19937_64& rng, std::size_t mu) {
  std::uniform_real_distribution<double> mass(0.3, 3.0);
  std::uniform_real_distribution<double> stiff(0.5, 6.0);
  std::uniform_real_distribution<double> coup(-0.4, 0.4);
  OscillatorSystem sys;
  sys.mass_small = mass(rng);
  sys.stiffness_small = stiff(rng);
  for (std::size_t i = 0; i < mu; ++i) {
    sys.masses_large.push_back(mass(rng));
    sys.stiffnesses_large.push_back(stiff(rng));
    sys.coupling.push_back(coup(rng));
  }
  return sys;
}

}  // namespace

TEST_CASE("two-oscillator exact spectrum") {
  const TwoOscSpectrum degenerate = two_osc_exact_spectrum(1.0, 1.0, 0.0);
  CHECK(degenerate.lambda_plus == 1.0);
  CHECK(degenerate.lambda_minus == 1.0);

  const TwoOscSpectrum s = two_osc_exact_spectrum(2.0, 1.0, 0.1);
  CHECK(s.lambda_plus == doctest::Approx(2.009901951359279).epsilon(1e-14));
  CHECK(s.lambda_minus == doctest::Approx(0.990098048640721).epsilon(1e-14));

  // direct 2x2 eigensolve oracle (unit masses make eps the raw coupling)
  const auto dense = oracle::dense_spectrum(pair_system(2.0, 1.0, 0.1));
  CHECK(s.lambda_minus == doctest::Approx(dense[0]).epsilon(1e-12));
  CHECK(s.lambda_plus == doctest::Approx(dense[1]).epsilon(1e-12));

  for (double eps : {0.0, 0.3, 2.0}) {
    const auto t = two_osc_exact_spectrum(1.7, 1.1, eps);
    CHECK(t.lambda_plus + t.lambda_minus == doctest::Approx(2.8).epsilon(1e-15));
  }
}

TEST_CASE("two-oscillator weak-bond spectrum") {
  const TwoOscApprox a = two_osc_approx_spectrum(2.0, 1.0, 0.1);
  CHECK(a.lambda_plus == doctest::Approx(2.01).epsilon(1e-14));
  CHECK(a.lambda_minus == doctest::Approx(0.99).epsilon(1e-14));
  CHECK(a.weak_coupling);
  const double bound = 2.0 * std::pow(0.1, 4) / std::pow(0.5, 3);
  CHECK(std::abs(a.residual_plus) <= bound);
  CHECK(std::abs(a.residual_minus) <= bound);

  const TwoOscApprox exact0 = two_osc_approx_spectrum(2.0, 1.0, 0.0);
  CHECK(exact0.residual_plus == 0.0);
  CHECK(exact0.residual_minus == 0.0);

  // quartic error growth: slope of log(err) vs log(eps) near 4
  const double e1 = std::abs(two_osc_approx_spectrum(2.0, 1.0, 0.15).residual_plus);
  const double e2 = std::abs(two_osc_approx_spectrum(2.0, 1.0, 0.015).residual_plus);
  const double slope = std::log10(e1 / e2);
  CHECK(slope > 3.8);
  CHECK(slope < 4.2);

  CHECK_FALSE(two_osc_approx_spectrum(2.0, 1.0, 0.4).weak_coupling);
}

TEST_CASE("two-oscillator eigenvectors") {
  const TwoOscVectors v = two_osc_eigenvectors(2.0, 1.0, 0.1);
  CHECK(v.plus_approx[0] == 1.0);
  CHECK(v.plus_approx[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(v.minus_approx[0] == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(v.minus_approx[1] == 1.0);

  const TwoOscVectors id = two_osc_eigenvectors(2.0, 1.0, 0.0);
  CHECK(id.plus_exact[0] == 1.0);
  CHECK(id.plus_exact[1] == 0.0);

  for (double eps : {0.02, 0.05, 0.1}) {
    const TwoOscVectors w = two_osc_eigenvectors(2.0, 1.0, eps);
    const double exact_angle = std::atan2(w.plus_exact[1], w.plus_exact[0]);
    const double approx_angle = eps / (2.0 * 0.5);
    CHECK(std::abs(exact_angle - approx_angle) <= std::pow(eps / 0.5, 2));
  }

  CHECK_FALSE(two_osc_eigenvectors(1.0, 1.0, 0.1).perturbative_valid);
}

TEST_CASE("secular function") {
  SUBCASE("uncoupled root at v/m") {
    const OscillatorSystem sys = pair_system(2.0, 1.0, 0.0);
    CHECK(secular_function(sys, 2.0) == 0.0);
  }

  SUBCASE("mu = 1 roots match the lambda-space closed form") {
    const OscillatorSystem sys = pair_system(2.0, 1.0, 0.1, 2.0, 0.5);
    const double eps = 0.1 / std::sqrt(2.0 * 0.5);  // eps^2 = b^2/(m M)
    const TwoOscSpectrum want = two_osc_exact_spectrum(2.0 / 2.0, 1.0 / 0.5, eps);
    const auto spec = perturbed_spectrum(sys);
    CHECK(spec.eigenvalues[0] == doctest::Approx(want.lambda_minus).epsilon(1e-12));
    CHECK(spec.eigenvalues[1] == doctest::Approx(want.lambda_plus).epsilon(1e-12));
    CHECK(std::abs(secular_function(sys, spec.eigenvalues[0])) < 1e-12);
  }

  SUBCASE("pole proximity flagged") {
    const OscillatorSystem sys = pair_system(2.0, 1.0, 0.1);
    CHECK_THROWS_AS(secular_function(sys, 1.0 + 1e-14), PoleError);
  }

  SUBCASE("mu = 4 roots match the dense oracle") {
    std::mt19937_64 rng(7);
    const OscillatorSystem sys = random_system(rng, 4);
    const auto spec = perturbed_spectrum(sys);
    const auto dense = oracle::dense_spectrum(sys);
    REQUIRE(spec.eigenvalues.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(spec.eigenvalues[i] == doctest::Approx(dense[i]).epsilon(1e-8));
      CHECK(std::abs(secular_function(sys, spec.eigenvalues[i])) <
            1e-10 * sys.stiffness_small);
    }
  }
}

TEST_CASE("perturbed spectrum structure") {
  SUBCASE("zero coupling returns the unperturbed set") {
    OscillatorSystem sys;
    sys.mass_small = 1.0;
    sys.stiffness_small = 2.0;
    sys.masses_large = {1.0, 2.0};
    sys.stiffnesses_large = {1.0, 9.0};
    sys.coupling = {0.0, 0.0};
    const auto spec = perturbed_spectrum(sys);
    REQUIRE(spec.eigenvalues.size() == 3);
    CHECK(spec.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spec.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(spec.eigenvalues[2] == doctest::Approx(4.5).epsilon(1e-14));
  }

  SUBCASE("mass-orthonormality, normalization, and interlacing") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t mu = 1 + rep % 6;
      OscillatorSystem sys = random_system(rng, mu);
      sys.mass_small = 1.0;  // the printed normalization identity assumes m = 1
      for (auto& b : sys.coupling) {
        if (b == 0.0) b = 0.05;
      }
      const auto spec = perturbed_spectrum(sys);
      REQUIRE(spec.eigenvalues.size() == mu + 1);

      for (std::size_t r = 0; r < mu + 1; ++r) {
        for (std::size_t s = 0; s < mu + 1; ++s) {
          double dot = sys.mass_small * spec.modes[r][0] * spec.modes[s][0];
          for (std::size_t i = 0; i < mu; ++i) {
            dot += sys.masses_large[i] * spec.modes[r][i + 1] * spec.modes[s][i + 1];
          }
          CHECK(std::abs(dot - (r == s ? 1.0 : 0.0)) < 1e-10);
        }
      }

      // m |a|^2 [1 + <M (V - M lambda)^-1 b, (V - M lambda)^-1 b>] = 1
      for (std::size_t s = 0; s < mu + 1; ++s) {
        const double a = spec.small_components[s];
        if (a == 0.0) continue;  // pole eigenvectors carry no small component
        double bracket = 1.0;
        for (std::size_t i = 0; i < mu; ++i) {
          const double r = sys.coupling[i] /
                           (sys.stiffnesses_large[i] -
                            sys.masses_large[i] * spec.eigenvalues[s]);
          bracket += sys.masses_large[i] * r * r;
        }
        CHECK(sys.mass_small * a * a * bracket == doctest::Approx(1.0).epsilon(1e-10));
      }

      // strict interlacing against the sorted pole set
      auto poles = sys.poles();
      std::sort(poles.begin(), poles.end());
      bool distinct = true;
      for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
        if (poles[i + 1] - poles[i] < 1e-9) distinct = false;
      }
      if (distinct) {
        for (std::size_t i = 0; i < poles.size(); ++i) {
          CHECK(spec.eigenvalues[i] < poles[i]);
          CHECK(poles[i] < spec.eigenvalues[i + 1]);
        }
      }
    }
  }

  SUBCASE("starlet: a triple eigenvalue splits into three simple ones") {
    OscillatorSystem sys;
    sys.mass_small = 1.0;
    sys.stiffness_small = 4.0;
    sys.masses_large = {1.0, 1.0};
    sys.stiffnesses_large = {4.0, 4.0};  // both poles resonant with v/m
    sys.coupling = {0.06, 0.08};
    const auto spec = perturbed_spectrum(sys);
    REQUIRE(spec.eigenvalues.size() == 3);
    const double split = std::sqrt(0.06 * 0.06 + 0.08 * 0.08);
    CHECK(spec.eigenvalues[0] == doctest::Approx(4.0 - split).epsilon(1e-12));
    CHECK(spec.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(spec.eigenvalues[2] == doctest::Approx(4.0 + split).epsilon(1e-12));
    const auto dense = oracle::dense_spectrum(sys);
    for (int i = 0; i < 3; ++i) {
      CHECK(spec.eigenvalues[i] == doctest::Approx(dense[i]).epsilon(1e-10));
    }
    // the middle mode stays at the pole, orthogonal to the coupling
    CHECK(spec.modes[1][0] == 0.0);
    CHECK(0.06 * spec.modes[1][1] + 0.08 * spec.modes[1][2] ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("solve_cauchy") {
  const OscillatorSystem sys = pair_system(2.0, 1.0, 0.1);
  const auto spec = perturbed_spectrum(sys);

  SUBCASE("an eigenvector excites a single stationary mode") {
    CauchyState init;
    init.u = spec.modes[1][0];
    init.large = {spec.modes[1][1]};
    init.large_dot = {0.0};
    const auto sol = solve_cauchy(sys, spec, init);
    CHECK(sol.amplitudes[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sol.amplitudes[0]) < 1e-12);
    // a stationary mode has a flat energy envelope: sample at period multiples
    const double e0 = small_energy(sys, sol.state_at(0.0));
    const double period = 2.0 * kPi / spec.frequencies[1];
    for (int k = 1; k <= 5; ++k) {
      CHECK(small_energy(sys, sol.state_at(k * period)) ==
            doctest::Approx(e0).epsilon(1e-9));
    }
  }

  SUBCASE("reconstruction reproduces arbitrary initial data") {
    CauchyState init;
    init.u = 0.7;
    init.u_dot = -0.3;
    init.large = {0.2};
    init.large_dot = {0.9};
    const auto sol = solve_cauchy(sys, spec, init);
    const CauchyState back = sol.state_at(0.0);
    CHECK(back.u == doctest::Approx(init.u).epsilon(1e-10));
    CHECK(back.u_dot == doctest::Approx(init.u_dot).epsilon(1e-10));
    CHECK(back.large[0] == doctest::Approx(init.large[0]).epsilon(1e-10));
    CHECK(back.large_dot[0] == doctest::Approx(init.large_dot[0]).epsilon(1e-10));
    // phases live in [0, 2 pi)
    for (double phi : sol.phases) {
      CHECK(phi >= 0.0);
      CHECK(phi < 2.0 * kPi);
    }
  }

  SUBCASE("the near-identity initial condition excites the + normal mode") {
    // x(0) = 1, X(0) = eps/(2 delta) with eps = 0.1, delta = 0.5
    CauchyState init;
    init.u = 1.0;
    init.large = {0.1};
    init.large_dot = {0.0};
    const auto sol = solve_cauchy(sys, spec, init);
    // eigenvalues ascend, so the + mode (near lambda_m = 2) is index 1
    const double ratio = sol.amplitudes[0] / sol.amplitudes[1];
    CHECK(std::abs(ratio) <= std::pow(0.1 / 0.5, 2));
  }

  SUBCASE("full exchange at exact tuning matches the RK4 oracle") {
    const OscillatorSystem tuned = pair_system(1.0, 1.0, 0.05);
    const auto tuned_spec = perturbed_spectrum(tuned);
    const auto sol = solve_cauchy(tuned, tuned_spec, rest_state(1, 1.0));
    const double t_fast = 2.0 * kPi / tuned_spec.frequencies.back();
    for (double t : {3.7, 31.4, 62.8}) {
      const CauchyState want = oracle::rk4_integrate(tuned, rest_state(1, 1.0), t,
                                                     t_fast / 200.0);
      const CauchyState got = sol.state_at(t);
      CHECK(got.u == doctest::Approx(want.u).epsilon(1e-6));
      CHECK(got.large[0] == doctest::Approx(want.large[0]).epsilon(1e-6));
      CHECK(got.u_dot == doctest::Approx(want.u_dot).epsilon(1e-6));
    }
  }

  SUBCASE("a non-orthonormal spectrum is rejected") {
    PerturbedSpectrum broken = spec;
    broken.modes[0][0] *= 1.5;
    CHECK_THROWS_AS(solve_cauchy(sys, broken, rest_state(1, 1.0)), DomainError);
  }
}

TEST_CASE("energy bookkeeping and the xi identity") {
  const OscillatorSystem sys = pair_system(1.0, 1.0, 0.05);
  const auto spec = perturbed_spectrum(sys);
  const auto sol = solve_cauchy(sys, spec, rest_state(1, 1.0));
  const double beat = 2.0 * kPi / (spec.frequencies[1] - spec.frequencies[0]);

  SUBCASE("total energy conserved to 1e-10 over ten beat periods") {
    const double e0 = total_energy(sys, sol.state_at(0.0));
    for (int i = 0; i <= 400; ++i) {
      const double t = 10.0 * beat * i / 400.0;
      CHECK(std::abs(total_energy(sys, sol.state_at(t)) - e0) <= 1e-10 * e0);
    }
  }

  SUBCASE("|xi|^2 equals twice the small-oscillator energy pointwise") {
    for (int i = 0; i <= 97; ++i) {
      const double t = 2.3 * beat * i / 97.0;
      const CauchyState s = sol.state_at(t);
      const double lhs = 0.5 * std::norm(xi_characteristic(sys, s));
      CHECK(std::abs(lhs - small_energy(sys, s)) <= 1e-12 * (1.0 + lhs));
    }
  }

  SUBCASE("measured beat period matches the frequency splitting within 1%") {
    const auto series = energy_series(sol, 0.0, 3.2 * beat, 20000);
    const double t_fast = 2.0 * kPi / spec.frequencies.back();
    const double measured = measure_envelope_period(series.t, series.e_small, 2.0 * t_fast);
    CHECK(std::abs(measured - beat) / beat < 0.01);
  }

  SUBCASE("migrating energy arrives in opposite phase") {
    const auto series = energy_series(sol, 0.0, beat, 4096);
    double mean_s = 0.0, mean_l = 0.0;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      mean_s += series.e_small[i];
      mean_l += series.e_large[i];
    }
    mean_s /= static_cast<double>(series.t.size());
    mean_l /= static_cast<double>(series.t.size());
    double num = 0.0, den_s = 0.0, den_l = 0.0;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      const double ds = series.e_small[i] - mean_s;
      const double dl = series.e_large[i] - mean_l;
      num += ds * dl;
      den_s += ds * ds;
      den_l += dl * dl;
    }
    CHECK(num / std::sqrt(den_s * den_l) <= -0.95);
  }
}

TEST_CASE("analytic xi") {
  const OscillatorSystem sys = window_system();
  const auto spec = perturbed_spectrum(sys);
  const auto sol = solve_cauchy(sys, spec, rest_state(1, 1.0));

  SUBCASE("t = 0 reduces to the initial characteristic") {
    const std::complex<double> want = xi_characteristic(sys, sol.state_at(0.0));
    const std::complex<double> got = xi_analytic(sol, 0.0);
    CHECK(std::abs(got - want) < 1e-14);
  }

  SUBCASE("zero coupling leaves free rotation of xi(0)") {
    const OscillatorSystem free_sys = pair_system(1.0, 1.44, 0.0);
    const auto free_sol =
        solve_cauchy(free_sys, perturbed_spectrum(free_sys), rest_state(1, 0.8));
    const std::complex<double> xi0 = xi_characteristic(free_sys, free_sol.state_at(0.0));
    for (double t : {1.0, 8.0, 33.0}) {
      const std::complex<double> want = std::polar(1.0, 1.0 * t) * xi0;  // omega01 = 1
      CHECK(std::abs(xi_analytic(free_sol, t) - want) < 1e-12);
    }
  }

  SUBCASE("agrees with the modal characteristic over one beat period") {
    const double beat = 2.0 * kPi / (spec.frequencies[1] - spec.frequencies[0]);
    double scale = 0.0;
    for (int i = 0; i <= 256; ++i) {
      scale = std::max(scale,
                       std::abs(xi_characteristic(sys, sol.state_at(beat * i / 256.0))));
    }
    for (int i = 0; i <= 256; ++i) {
      const double t = beat * i / 256.0;
      const std::complex<double> modal = xi_characteristic(sys, sol.state_at(t));
      CHECK(std::abs(xi_analytic(sol, t) - modal) <= 1e-8 * scale);
    }
  }

  SUBCASE("matches direct quadrature of the defining integral") {
    // xi(t) = e^{i w01 t} [xi(0) - (1/sqrt(m)) Int_0^t e^{-i w01 tau} f(tau) dtau]
    const double omega01 = 1.0;
    auto drive = [&](double tau) {
      double f = 0.0;
      for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
        f += sys.coupling[0] * spec.modes[s][1] * sol.amplitudes[s] *
             std::cos(spec.frequencies[s] * tau + sol.phases[s]);
      }
      return f;
    };
    for (double t : {40.0, 333.0}) {
      const std::complex<double> integral(
          oracle::simpson([&](double tau) { return std::cos(omega01 * tau) * drive(tau); },
                          0.0, t, 20000),
          oracle::simpson([&](double tau) { return -std::sin(omega01 * tau) * drive(tau); },
                          0.0, t, 20000));
      const std::complex<double> xi0 = xi_characteristic(sys, sol.state_at(0.0));
      const std::complex<double> want = std::polar(1.0, omega01 * t) * (xi0 - integral);
      CHECK(std::abs(xi_analytic(sol, t) - want) < 1e-8);
    }
  }

  SUBCASE("the closed form is limited to mu <= 2") {
    std::mt19937_64 rng(3);
    const OscillatorSystem big = random_system(rng, 3);
    const auto big_sol = solve_cauchy(big, perturbed_spectrum(big), rest_state(3, 1.0));
    CHECK_THROWS_AS(xi_analytic(big_sol, 0.5), DomainError);
  }
}

TEST_CASE("windowed average") {
  std::vector<double> t(4096), y(4096);

  SUBCASE("constant series") {
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) * 0.01;
      y[i] = 3.25;
    }
    CHECK(windowed_average(t, y, 20.0, 5.0) == doctest::Approx(3.25).epsilon(1e-14));
  }

  SUBCASE("cos^2 averages to one half over a full period") {
    const double nu = 2.0;
    const double period = 2.0 * kPi / nu;
    const double dt = period / 1024.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) * dt;
      y[i] = std::pow(std::cos(nu * t[i]), 2);
    }
    CHECK(std::abs(windowed_average(t, y, 10.0, period) - 0.5) < 1e-6);
  }

  SUBCASE("degenerate windows rejected") {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
    CHECK_THROWS_AS(windowed_average(t, t, 100.0, 0.0), NumericalError);
    CHECK_THROWS_AS(windowed_average(t, t, 1.0, 5000.0), NumericalError);
    CHECK_THROWS_AS(windowed_average(t, t, 10.0, 4.0), NumericalError);  // < 16 samples
  }

  SUBCASE("stepwise window system") {
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) * 0.01;
      y[i] = 2.0 + t[i];
    }
    const auto [centers, averages] = windowed_series(t, y, 2.0, 0.5);
    REQUIRE(centers.size() > 10);
    CHECK(centers[1] - centers[0] == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t i = 0; i < centers.size(); ++i) {
      CHECK(averages[i] == doctest::Approx(2.0 + centers[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("optimal window") {
  const OscillatorSystem sys = window_system();

  SUBCASE("the defining balance holds exactly") {
    const double dstar = optimal_window(sys);
    const double dlambda = 0.5 * std::abs(1.21 - 1.0);
    const double domega = std::abs(std::sqrt(1.21) - 1.0);
    const double drift = 0.02 * 0.02 * dstar / (4.0 * dlambda * 1.0);
    const double leak = 1.0 / (dstar * domega);
    CHECK(drift == doctest::Approx(leak).epsilon(1e-12));
  }

  SUBCASE("the width scales as the inverse coupling") {
    // doubling b halves the window; quadrupling b quarters it
    OscillatorSystem doubled = sys;
    doubled.coupling = {0.04};
    CHECK(optimal_window(doubled) ==
          doctest::Approx(optimal_window(sys) / 2.0).epsilon(1e-12));
    OscillatorSystem quadrupled = sys;
    quadrupled.coupling = {0.08};
    CHECK(optimal_window(quadrupled) ==
          doctest::Approx(optimal_window(sys) / 4.0).epsilon(1e-12));
  }

  SUBCASE("zero coupling and exact tuning are signaled") {
    OscillatorSystem none = sys;
    none.coupling = {0.0};
    CHECK_THROWS_AS(optimal_window(none), NumericalError);
    CHECK_THROWS_AS(optimal_window(pair_system(1.0, 1.0, 0.1)), NumericalError);
  }

  SUBCASE("window contrast of the driven beat peaks near the optimum") {
    const auto spec = perturbed_spectrum(sys);
    const auto sol = solve_cauchy(sys, spec, rest_state(1, 1.0));
    const double dstar = optimal_window(sys);
    const double slow = 2.0 * kPi /
                        std::abs(spec.frequencies[0] - 1.0);  // growth-return period
    const double duration = 1.2 * slow + 12.0 * dstar;
    const std::size_t n = static_cast<std::size_t>(duration / 0.3);
    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = duration * static_cast<double>(i) / static_cast<double>(n - 1);
      y[i] = std::norm(xi_driven(sol, t[i]));
    }
    auto contrast = [&](double width) {
      double mx = -1.0, mn = 1e300;
      for (int j = 0; j <= 120; ++j) {
        const double T = 6.0 * dstar + slow * j / 120.0;
        const double v = windowed_average(t, y, T, width);
        mx = std::max(mx, v);
        mn = std::min(mn, v);
      }
      return (mx - mn) / (mx + mn);
    };
    double best = 0.0;
    for (int j = 0; j <= 12; ++j) {
      best = std::max(best, contrast(dstar / 10.0 * std::pow(100.0, j / 12.0)));
    }
    CHECK(contrast(dstar) >= 0.9 * best);
  }
}

TEST_CASE("averaged energy estimate") {
  const OscillatorSystem sys = window_system();
  const auto sol = solve_cauchy(sys, perturbed_spectrum(sys), rest_state(1, 1.0));
  bool valid = false;

  SUBCASE("t = 0 keeps only the offset term") {
    const double offset = averaged_energy_estimate(sol, 0.0, &valid);
    CHECK(valid);
    CHECK(offset > 0.0);
    const double later = averaged_energy_estimate(sol, 100.0, &valid);
    CHECK(later > offset);
  }

  SUBCASE("envelope period of the slow term") {
    const double period = 4.0 * kPi * 0.105 * 1.0 / (0.02 * 0.02);
    const double a = averaged_energy_estimate(sol, 123.0, &valid);
    const double b = averaged_energy_estimate(sol, 123.0 + period, &valid);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }

  SUBCASE("envelope amplitude matches the windowed driven series within 20%") {
    const double dstar = optimal_window(sys);
    const double x = 0.02 * 0.02 / (4.0 * 0.105 * 1.0);
    const double slow = 2.0 * kPi / x;
    const double duration = 1.25 * slow + 12.0 * dstar;
    const std::size_t n = static_cast<std::size_t>(duration / 0.3);
    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = duration * static_cast<double>(i) / static_cast<double>(n - 1);
      y[i] = std::norm(xi_driven(sol, t[i]));
    }
    double mx = -1.0, mn = 1e300;
    for (int j = 0; j <= 200; ++j) {
      const double T = 6.0 * dstar + slow * j / 200.0;
      const double v = windowed_average(t, y, T, dstar);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    double emx = -1.0, emn = 1e300;
    for (int j = 0; j <= 200; ++j) {
      const double e = averaged_energy_estimate(sol, (kPi / x) * j / 200.0, &valid);
      emx = std::max(emx, e);
      emn = std::min(emn, e);
    }
    CHECK(valid);
    CHECK(std::abs((mx - mn) - (emx - emn)) / (emx - emn) < 0.2);
  }

  SUBCASE("outside the validity regime the flag drops") {
    OscillatorSystem strong = sys;
    strong.coupling = {0.2};
    const auto ssol = solve_cauchy(strong, perturbed_spectrum(strong), rest_state(1, 1.0));
    averaged_energy_estimate(ssol, 1.0, &valid);
    CHECK_FALSE(valid);
  }
}

TEST_CASE("transfer coefficient") {
  SUBCASE("complete periodic exchange at exact tuning") {
    const auto res = transfer_coefficient(pair_system(1.0, 1.0, 0.01), 1.0);
    CHECK(res.k >= 0.99);
    CHECK(res.k <= 1.0 + 1e-9);
  }

  SUBCASE("no coupling, no transfer") {
    const auto res = transfer_coefficient(pair_system(1.0, 1.21, 0.0), 1.0);
    CHECK(res.k == 0.0);
  }

  SUBCASE("strictly decreasing along a detuning grid") {
    double prev = 2.0;
    for (int i = 0; i < 8; ++i) {
      const double detune = 0.002 + 0.01 * i;
      const double lambda2 = std::pow(1.0 + detune, 2);
      const auto res = transfer_coefficient(pair_system(1.0, lambda2, 0.01), 1.0);
      CHECK(res.k < prev);
      prev = res.k;
    }
  }

  SUBCASE("short horizons are refused with the required span") {
    const OscillatorSystem sys = pair_system(1.0, 1.0, 0.01);
    try {
      transfer_coefficient(sys, 1.0, 10.0);
      FAIL("expected a horizon refusal");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("beat period") != std::string::npos);
    }
  }
}

TEST_CASE("bond-pair parameterization") {
  const OscillatorSystem sys = OscillatorSystem::from_bond_pair(2.0, 3.0, 4.0, 5.0, 0.5, 1.0);
  CHECK(sys.coupling[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(OscillatorSystem::from_bond_pair(2.0, 3.0, 4.0, 5.0, 0.5, 0.7),
                  ConfigError);
}
