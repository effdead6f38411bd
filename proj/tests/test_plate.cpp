#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "sgo/plate.hpp"
#include "sgo/specfun.hpp"

using namespace sgo;
using namespace sgo::plate;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

PlateSpec active_spec() { return PlateSpec{17.28e10, 0.28, 3380.0, 3e4, 3e9}; }
PlateSpec complement_spec() { return PlateSpec{17.28e10, 0.28, 3380.0, 1e5, 0.0}; }
CircularGeometry geometry() { return CircularGeometry{2.6e5, 5e6, 0.0}; }

RadialSamples sample_radial_mode(const PlateSpec& spec, const CircularGeometry& geom,
                                 const ThetaParam& tp, std::size_t n) {
  RadialSamples s;
  s.r0 = 0.0;
  s.dr = geom.epsilon / static_cast<double>(n - 1);
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = radial_mode(spec, geom, tp, s.radius_at(i));
  return s;
}

}  // namespace

TEST_CASE("derived rigidity constants") {
  const PlateSpec s = active_spec();
  CHECK(std::abs(s.d1() - 1.56e10) / 1.56e10 < 5e-3);
  CHECK(s.rigidity() == doctest::Approx(s.d1() * 2.7e13).epsilon(1e-12));
  CHECK(s.tension_q() == doctest::Approx(3e9 * 3e4).epsilon(1e-12));
}

TEST_CASE("theta round trip and the Q1 = 0 degeneracy") {
  PlateSpec s = active_spec();
  for (double q1 : {1e8, 1e9, 3e9}) {
    s.tension_q1 = q1;
    for (double omega = 1e-5; omega <= 1e-2; omega *= 3.7) {
      const ThetaParam tp = theta_from_omega(s, omega);
      CHECK(tp.theta > 0.0);
      // the defining identity sinh(theta) 2 omega H sqrt(D1 rho) = Q1
      const double lhs =
          std::sinh(tp.theta) * 2.0 * omega * s.thickness * std::sqrt(s.d1() * s.density);
      CHECK(lhs == doctest::Approx(q1).epsilon(1e-12));
      CHECK(omega_from_theta(s, tp.theta) == doctest::Approx(omega).epsilon(1e-12));
    }
  }
  s.tension_q1 = 0.0;
  CHECK(theta_from_omega(s, 1e-3).theta == 0.0);
}

TEST_CASE("factorization wavenumbers") {
  const double omega = 2.0 * kPi * 2e-4;

  SUBCASE("symmetric at zero compression") {
    PlateSpec s = active_spec();
    s.tension_q1 = 0.0;
    const Wavenumbers k = factorization_wavenumbers(s, omega);
    const double k0 = std::pow(omega * omega * s.density / (9e8 * s.d1()), 0.25);
    CHECK(k.k_j == doctest::Approx(k0).epsilon(1e-14));
    CHECK(k.k_i == doctest::Approx(k0).epsilon(1e-14));
  }

  SUBCASE("profile parameter set lands near the published J argument") {
    const Wavenumbers k = factorization_wavenumbers(active_spec(), omega);
    CHECK(k.k_j * 2.6e5 == doctest::Approx(3.81).epsilon(5e-3));
    CHECK(k.k_i * 2.6e5 == doctest::Approx(0.345).epsilon(5e-3));
  }

  SUBCASE("product is independent of theta") {
    for (double q1 : {0.0, 5e8, 3e9}) {
      PlateSpec s = active_spec();
      s.tension_q1 = q1;
      const Wavenumbers k = factorization_wavenumbers(s, omega);
      const double want = std::sqrt(omega * omega * s.density / (9e8 * s.d1()));
      CHECK(k.k_j * k.k_i == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("factor operators annihilate their Bessel solutions") {
  // [-sqrt(D1) H Lap - Q1/(2 sqrt(D1) H) -+ sqrt(omega^2 rho + Q1^2/(4 D1 H^2))]
  // applied to J0(k_J r) and I0(k_I r) through finite differences
  const PlateSpec s = active_spec();
  const double omega = 2.0 * kPi * 2e-4;
  const Wavenumbers k = factorization_wavenumbers(s, omega);
  const double eps = 2.6e5;
  const double root_term =
      std::sqrt(omega * omega * s.density +
                s.tension_q1 * s.tension_q1 / (4.0 * s.d1() * s.thickness * s.thickness));
  const double mid_term = s.tension_q1 / (2.0 * std::sqrt(s.d1()) * s.thickness);

  const std::size_t n = 4097;
  const double h = eps / static_cast<double>(n - 1);
  for (int branch = 0; branch < 2; ++branch) {
    const double kk = branch == 0 ? k.k_j : k.k_i;
    const double sign = branch == 0 ? -1.0 : +1.0;  // -S for J-type, +S for I-type
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = h * static_cast<double>(i);
      u[i] = branch == 0 ? specfun::bessel_j(0, kk * r).value
                         : specfun::bessel_i_scaled(0, kk * r).value *
                               std::exp(kk * r - kk * eps);
    }
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; i += 16) {
      const double r = h * static_cast<double>(i);
      const double d1 = (u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * h);
      const double d2 =
          (-u[i - 2] + 16 * u[i - 1] - 30 * u[i] + 16 * u[i + 1] - u[i + 2]) / (12 * h * h);
      const double lap = d2 + d1 / r;
      const double applied =
          -std::sqrt(s.d1()) * s.thickness * lap - mid_term * u[i] + sign * root_term * u[i];
      worst = std::max(worst, std::abs(applied));
    }
    CHECK(worst <= 1e-8 * root_term);
  }
}

TEST_CASE("radial mode") {
  const PlateSpec s = active_spec();
  const CircularGeometry g = geometry();
  const double omega = 2.0 * kPi * 2e-4;
  const ThetaParam tp = theta_from_omega(s, omega);

  SUBCASE("clamped at the rim by construction") {
    double peak = 0.0;
    for (double r = 0.0; r <= g.epsilon; r += g.epsilon / 64.0) {
      peak = std::max(peak, std::abs(radial_mode(s, g, tp, r)));
    }
    CHECK(std::abs(radial_mode(s, g, tp, g.epsilon)) <= 1e-10 * peak);
  }

  SUBCASE("center value from the series oracle") {
    const Wavenumbers k = factorization_wavenumbers(s, omega);
    const double want =
        1.0 / static_cast<double>(oracle::bessel_j(0, k.k_j * g.epsilon)) -
        1.0 / static_cast<double>(oracle::bessel_i(0, k.k_i * g.epsilon));
    CHECK(radial_mode(s, g, tp, 0.0) == doctest::Approx(want).epsilon(1e-10));
  }

  SUBCASE("continuous in theta at zero compression") {
    PlateSpec weak = s;
    weak.tension_q1 = 1e2;
    PlateSpec zero = s;
    zero.tension_q1 = 0.0;
    for (double r : {0.0, 1e5, 2e5}) {
      CHECK(radial_mode(weak, g, theta_from_omega(weak, omega), r) ==
            doctest::Approx(radial_mode(zero, g, theta_from_omega(zero, omega), r))
                .epsilon(1e-4));
    }
  }
}

TEST_CASE("sectorial modes") {
  const PlateSpec s = active_spec();
  const CircularGeometry g = geometry();
  const ThetaParam tp = theta_from_omega(s, 2.0 * kPi * 2e-4);

  CHECK(sectorial_mode(s, g, 1.0, tp, 1e5, 0.0, Parity::kSin) == 0.0);
  CHECK(std::abs(sectorial_mode(s, g, 1.0, tp, g.epsilon, 0.7, Parity::kCos)) < 1e-10);
  for (double r : {0.0, 7e4, 1.9e5, 2.6e5}) {
    CHECK(sectorial_mode(s, g, 0.0, tp, r, 0.3, Parity::kCos) ==
          doctest::Approx(radial_mode(s, g, tp, r)).epsilon(1e-12));
  }
}

TEST_CASE("active-zone dispersion residual") {
  const PlateSpec s = active_spec();
  const CircularGeometry g = geometry();

  SUBCASE("profile parameter set satisfies the equation to ~0.1") {
    const double res =
        dispersion_residual_active(s, g, theta_from_omega(s, 2.0 * kPi * 2e-4));
    MESSAGE("residual at the published parameter set: ", res);
    CHECK(std::abs(res) <= 0.15);
  }

  SUBCASE("zero compression reduces to the classical clamped-disc quotient") {
    PlateSpec zero = s;
    zero.tension_q1 = 0.0;
    const double x_classical = oracle::clamped_disc_first_root();
    CHECK(x_classical == doctest::Approx(3.196).epsilon(1e-3));
    // map the root back to omega and the residual must vanish there
    const double k = x_classical / g.epsilon;
    const double omega = omega_from_complement_wavenumber(zero, k);
    const double res = dispersion_residual_active(zero, g, theta_from_omega(zero, omega));
    CHECK(std::abs(res) < 1e-8);
  }

  SUBCASE("sign change brackets the root") {
    auto residual = [&](double omega) {
      return dispersion_residual_active(s, g, theta_from_omega(s, omega));
    };
    const double omega_root = 2.0 * kPi * 2.0998e-4;  // ground root of this profile
    CHECK(residual(omega_root * 0.98) * residual(omega_root * 1.02) < 0.0);
  }
}

TEST_CASE("complement dispersion residual") {
  const PlateSpec c = complement_spec();
  const double omega = 2.0 * kPi * 2e-4;
  const double k = complement_wavenumber(c, omega);
  CHECK(k == doctest::Approx(2.4176e-6).epsilon(1e-3));

  SUBCASE("no root below the first positive zero of the quotient") {
    // one-signed below the J0 pole, and again between the pole and the root
    const double a_pole = oracle::j0_first_root() / k;
    const double a_first = oracle::clamped_disc_first_root() / k;
    for (double a = a_pole * 0.05; a < a_pole * 0.99; a += a_pole * 0.05) {
      CHECK(dispersion_residual_complement(c, a, omega) < 0.0);
    }
    for (double a = a_pole * 1.01; a < a_first * 0.99; a += a_pole * 0.02) {
      CHECK(dispersion_residual_complement(c, a, omega) > 0.0);
    }
  }

  SUBCASE("root at the classical quotient value") {
    const double a_root = oracle::clamped_disc_first_root() / k;
    CHECK(std::abs(dispersion_residual_complement(c, a_root, omega)) < 1e-9);
  }
}

TEST_CASE("boundary residuals") {
  const CircularGeometry g = geometry();

  SUBCASE("clamped mode at a dispersion root satisfies both conditions") {
    PlateSpec zero = active_spec();
    zero.tension_q1 = 0.0;
    const double k = oracle::clamped_disc_first_root() / g.epsilon;
    const double omega = omega_from_complement_wavenumber(zero, k);
    const auto mode = sample_radial_mode(zero, g, theta_from_omega(zero, omega), 512);
    const auto res = boundary_residuals(zero, BoundaryBond{kInf, g.epsilon}, mode);
    CHECK(res.dirichlet <= 1e-6);
    CHECK(res.natural <= 1e-6);
  }

  SUBCASE("exact cancellation beta = D(1-sigma)/r") {
    const PlateSpec s = active_spec();
    const ThetaParam tp = theta_from_omega(s, 2.0 * kPi * 2e-4);
    const auto mode = sample_radial_mode(s, g, tp, 256);
    const double beta = s.rigidity() * (1.0 - s.poisson) / g.epsilon;
    const auto res = boundary_residuals(s, BoundaryBond{beta, g.epsilon}, mode);
    // only D Lap u survives; compare against the directly-evaluated trace
    const std::size_t m = mode.values.size() - 1;
    const double h = mode.dr;
    auto F = [&](std::size_t b) { return mode.values[m - b]; };
    const double du = (25 * F(0) - 48 * F(1) + 36 * F(2) - 16 * F(3) + 3 * F(4)) / (12 * h);
    const double d2u =
        (35 * F(0) - 104 * F(1) + 114 * F(2) - 56 * F(3) + 11 * F(4)) / (12 * h * h);
    double amp = 0.0;
    for (double v : mode.values) amp = std::max(amp, std::abs(v));
    const double want = std::abs(s.rigidity() * (d2u + du / g.epsilon)) / amp;
    CHECK(res.natural == doctest::Approx(want).epsilon(1e-12));
  }

  SUBCASE("off-root frequency leaves a visible Neumann residual") {
    PlateSpec zero = active_spec();
    zero.tension_q1 = 0.0;
    const double k = oracle::clamped_disc_first_root() / g.epsilon * 1.07;
    const double omega = omega_from_complement_wavenumber(zero, k);
    const auto mode = sample_radial_mode(zero, g, theta_from_omega(zero, omega), 512);
    const auto res = boundary_residuals(zero, BoundaryBond{kInf, g.epsilon}, mode);
    CHECK(res.natural > 1e-3);
  }

  CHECK_THROWS_AS(
      boundary_residuals(active_spec(), BoundaryBond{kInf, 1.0},
                         RadialSamples{0.0, 1.0, {1.0, 2.0, 3.0}}),
      NumericalError);
}

TEST_CASE("stability classification") {
  const PlateSpec s = active_spec();

  PlateSpec stretched = s;
  stretched.tension_q1 = 0.0;
  CHECK(stability_check(stretched, BoundaryBond{1e20, 2.6e5}).classification ==
        Stability::kStable);

  CHECK(stability_check(stretched, BoundaryBond{0.0, 2.6e5}).classification ==
        Stability::kIndeterminate);

  const auto rep = stability_check(s, BoundaryBond{kInf, 2.6e5});
  CHECK(rep.classification == Stability::kIndeterminate);
  CHECK(rep.annotation.find("below destruction limit") != std::string::npos);

  // monotone in beta: raising the bond never destabilizes; the threshold for
  // this plate sits at D(1-sigma)/r ~ 1.2e18
  bool was_stable = false;
  for (double beta = 0.0; beta <= 2.4e18; beta += 1.2e17) {
    const bool stable =
        stability_check(stretched, BoundaryBond{beta, 2.6e5}).classification ==
        Stability::kStable;
    if (was_stable) CHECK(stable);
    was_stable = stable;
  }
  CHECK(was_stable);
}

TEST_CASE("single-mode energy estimate") {
  const double e = mode_energy(2e-4, 2e-3, 1e14, 1e5, 3380.0);
  CHECK(std::abs(e - 5.4e10) / 5.4e10 < 0.05);
  CHECK(e == doctest::Approx(5.3375e10).epsilon(1e-3));

  CHECK(mode_energy(2e-4, 0.0, 1e14, 1e5, 3380.0) == 0.0);
  CHECK(mode_energy(2e-4, 4e-3, 1e14, 1e5, 3380.0) == doctest::Approx(4.0 * e).epsilon(1e-12));
  CHECK(mode_energy(2e-4, 2e-3, 2e14, 1e5, 3380.0) == doctest::Approx(2.0 * e).epsilon(1e-12));
  CHECK(mode_energy(4e-4, 2e-3, 1e14, 1e5, 3380.0) == doctest::Approx(4.0 * e).epsilon(1e-12));
  CHECK(mode_energy(2e-4, 2e-3, 1e14, 3e5, 3380.0) == doctest::Approx(3.0 * e).epsilon(1e-12));
  CHECK(mode_energy(2e-4, 2e-3, 1e14, 1e5, 6760.0) == doctest::Approx(2.0 * e).epsilon(1e-12));
}

TEST_CASE("hamiltonian quadrature") {
  const PlateSpec s = active_spec();
  const CircularGeometry g = geometry();
  const BoundaryBond clamped{kInf, g.epsilon};

  SUBCASE("zero mode carries no energy") {
    RadialSamples zero;
    zero.r0 = 0.0;
    zero.dr = g.epsilon / 127.0;
    zero.values.assign(128, 0.0);
    CHECK(hamiltonian_energy(s, clamped, zero, zero) == 0.0);
  }

  SUBCASE("uniform velocity field is purely kinetic") {
    RadialSamples zero, vel;
    zero.r0 = vel.r0 = 0.0;
    zero.dr = vel.dr = g.epsilon / 255.0;
    zero.values.assign(256, 0.0);
    vel.values.assign(256, 2.5);
    const double area = kPi * g.epsilon * g.epsilon;
    const double want = 0.5 * s.thickness * s.density * area * 2.5 * 2.5;
    CHECK(hamiltonian_energy(s, clamped, zero, vel) == doctest::Approx(want).epsilon(1e-4));
  }

  SUBCASE("eigenmode virial balance") {
    PlateSpec zero = s;
    zero.tension_q1 = 0.0;
    const double k = oracle::clamped_disc_first_root() / g.epsilon;
    const double omega = omega_from_complement_wavenumber(zero, k);
    const auto mode = sample_radial_mode(zero, g, theta_from_omega(zero, omega), 512);
    RadialSamples rest = mode;
    rest.values.assign(mode.values.size(), 0.0);
    RadialSamples vel = mode;
    for (auto& v : vel.values) v *= omega;
    const double potential = hamiltonian_energy(zero, clamped, mode, rest);
    const double kinetic = hamiltonian_energy(zero, clamped, rest, vel);
    CHECK(std::abs(kinetic - potential) / potential < 0.01);
  }

  SUBCASE("compressed eigenmode virial balance includes the tension term") {
    const double nu_ground = 2.0998286e-4;  // ground root of this profile
    const double omega = 2.0 * kPi * nu_ground;
    const auto mode = sample_radial_mode(s, g, theta_from_omega(s, omega), 512);
    RadialSamples rest = mode;
    rest.values.assign(mode.values.size(), 0.0);
    RadialSamples vel = mode;
    for (auto& v : vel.values) v *= omega;
    const double potential = hamiltonian_energy(s, clamped, mode, rest);
    const double kinetic = hamiltonian_energy(s, clamped, rest, vel);
    CHECK(std::abs(kinetic - potential) / potential < 0.01);
  }

  RadialSamples coarse;
  coarse.r0 = 0.0;
  coarse.dr = 1.0;
  coarse.values.assign(32, 1.0);
  CHECK_THROWS_AS(hamiltonian_energy(s, clamped, coarse, coarse), NumericalError);
}

TEST_CASE("dispersion roots are separated by J-quotient poles") {
  const PlateSpec s = active_spec();
  const CircularGeometry g = geometry();
  auto kj_eps = [&](double omega) {
    return factorization_wavenumbers(s, omega).k_j * g.epsilon;
  };
  // ground and first overtone of the profile set
  auto residual = [&](double omega) {
    return dispersion_residual_active(s, g, theta_from_omega(s, omega));
  };
  const double w1 = 2.0 * kPi * 2.0998e-4;
  double w2 = 0.0;
  double prev = residual(w1 * 1.05);
  for (double w = w1 * 1.06; w < w1 * 40; w *= 1.01) {
    double cur;
    try {
      cur = residual(w);
    } catch (const PoleError&) {
      continue;
    }
    if (prev < 0 && cur > 0 && kj_eps(w) > 4.0) {
      w2 = w;
      break;
    }
    prev = cur;
  }
  REQUIRE(w2 > 0.0);
  // a J0 zero (quotient pole) sits strictly between consecutive roots
  const double pole_arg = oracle::bisect(
      [](double z) { return static_cast<double>(oracle::bessel_j(0.0, z)); }, 5.0, 6.0);
  CHECK(kj_eps(w1) < pole_arg);
  CHECK(kj_eps(w2) > pole_arg);
}
