#include "sgo/plate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgo/specfun.hpp"

namespace sgo::plate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleTol = 1e-12;

// Ratio I'_p(x) / I_p(x) through the scaled representation, safe for any x.
double i_quotient(double p, double x) {
  const auto e = specfun::bessel_i_scaled(p, x);
  if (std::abs(e.value) < kPoleTol) {
    throw PoleError("I-quotient denominator vanishes at x = " + std::to_string(x));
  }
  return e.derivative / e.value;
}

double j_quotient(double p, double x) {
  const auto e = specfun::bessel_j(p, x);
  if (std::abs(e.value) < kPoleTol) {
    throw PoleError("J-quotient denominator vanishes at x = " + std::to_string(x));
  }
  return e.derivative / e.value;
}

struct GridDerivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

// 5-point finite differences on a uniform grid, one-sided at the edges.
GridDerivatives derivatives_on_grid(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  GridDerivatives g;
  g.d1.resize(n);
  g.d2.resize(n);
  const double h2 = h * h;
  auto F = [&](std::size_t i) { return f[i]; };
  for (std::size_t i = 2; i + 2 < n; ++i) {
    g.d1[i] = (F(i - 2) - 8 * F(i - 1) + 8 * F(i + 1) - F(i + 2)) / (12 * h);
    g.d2[i] = (-F(i - 2) + 16 * F(i - 1) - 30 * F(i) + 16 * F(i + 1) - F(i + 2)) / (12 * h2);
  }
  g.d1[0] = (-25 * F(0) + 48 * F(1) - 36 * F(2) + 16 * F(3) - 3 * F(4)) / (12 * h);
  g.d1[1] = (-3 * F(0) - 10 * F(1) + 18 * F(2) - 6 * F(3) + F(4)) / (12 * h);
  g.d2[0] = (35 * F(0) - 104 * F(1) + 114 * F(2) - 56 * F(3) + 11 * F(4)) / (12 * h2);
  g.d2[1] = (11 * F(0) - 20 * F(1) + 6 * F(2) + 4 * F(3) - F(4)) / (12 * h2);
  const std::size_t m = n - 1;
  g.d1[m] = (25 * F(m) - 48 * F(m - 1) + 36 * F(m - 2) - 16 * F(m - 3) + 3 * F(m - 4)) / (12 * h);
  g.d1[m - 1] = (3 * F(m) + 10 * F(m - 1) - 18 * F(m - 2) + 6 * F(m - 3) - F(m - 4)) / (12 * h);
  g.d2[m] = (35 * F(m) - 104 * F(m - 1) + 114 * F(m - 2) - 56 * F(m - 3) + 11 * F(m - 4)) / (12 * h2);
  g.d2[m - 1] = (11 * F(m) - 20 * F(m - 1) + 6 * F(m - 2) + 4 * F(m - 3) - F(m - 4)) / (12 * h2);
  return g;
}

}  // namespace

double PlateSpec::rigidity() const { return d1() * thickness * thickness * thickness; }

void PlateSpec::validate() const {
  if (!(poisson > 0.0 && poisson < 1.0)) throw ConfigError("poisson must be in (0,1)");
  if (!(young_modulus > 0.0)) throw ConfigError("young_modulus must be > 0");
  if (!(density > 0.0)) throw ConfigError("density must be > 0");
  if (!(thickness > 0.0)) throw ConfigError("thickness must be > 0");
  if (!(tension_q1 >= 0.0)) throw ConfigError("tension_q1 must be >= 0");
}

void CircularGeometry::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (outer_radius != 0.0 && !(outer_radius > epsilon)) {
    throw ConfigError("outer_radius must exceed epsilon");
  }
}

double CircularGeometry::effective_area() const {
  if (area > 0.0) return area;
  return kPi * outer_radius * outer_radius;
}

ThetaParam theta_from_omega(const PlateSpec& spec, double omega) {
  if (!(omega > 0.0)) throw DomainError("theta_from_omega: omega must be > 0");
  const double s =
      spec.tension_q1 / (2.0 * omega * spec.thickness * std::sqrt(spec.d1() * spec.density));
  return ThetaParam{std::asinh(s), omega};
}

double omega_from_theta(const PlateSpec& spec, double theta) {
  if (!(theta > 0.0)) throw DomainError("omega_from_theta: theta must be > 0");
  if (!(spec.tension_q1 > 0.0)) {
    throw DomainError("omega_from_theta: undefined for an uncompressed plate");
  }
  return spec.tension_q1 /
         (2.0 * std::sinh(theta) * spec.thickness * std::sqrt(spec.d1() * spec.density));
}

Wavenumbers factorization_wavenumbers(const PlateSpec& spec, double omega) {
  const ThetaParam tp = theta_from_omega(spec, omega);
  const double k0 = std::pow(
      omega * omega * spec.density / (spec.thickness * spec.thickness * spec.d1()), 0.25);
  return Wavenumbers{k0 * std::exp(tp.theta / 2.0), k0 * std::exp(-tp.theta / 2.0)};
}

double sectorial_mode(const PlateSpec& spec, const CircularGeometry& geom, double p,
                      const ThetaParam& tp, double r, double phi, Parity parity) {
  if (!(p >= 0.0)) throw DomainError("sectorial_mode: order must be >= 0");
  if (!(r >= 0.0 && r <= geom.epsilon)) {
    throw DomainError("sectorial_mode: r must lie in [0, epsilon]");
  }
  const Wavenumbers k = factorization_wavenumbers(spec, tp.omega);
  const auto j_eps = specfun::bessel_j(p, k.k_j * geom.epsilon);
  if (std::abs(j_eps.value) < kPoleTol) {
    throw PoleError("sectorial_mode: J normalization is singular; perturb theta");
  }
  const auto i_eps = specfun::bessel_i_scaled(p, k.k_i * geom.epsilon);
  if (std::abs(i_eps.value) < kPoleTol) {
    throw PoleError("sectorial_mode: I normalization is singular");
  }
  const double j_part = specfun::bessel_j(p, k.k_j * r).value / j_eps.value;
  // Scaled I ratio; the leftover exponential never overflows since r <= eps.
  const double i_part = specfun::bessel_i_scaled(p, k.k_i * r).value / i_eps.value *
                        std::exp(k.k_i * (r - geom.epsilon));
  const double radial = j_part - i_part;
  const double angular = (parity == Parity::kSin) ? std::sin(p * phi) : std::cos(p * phi);
  return angular * radial;
}

double radial_mode(const PlateSpec& spec, const CircularGeometry& geom, const ThetaParam& tp,
                   double r) {
  return sectorial_mode(spec, geom, 0.0, tp, r, 0.0, Parity::kCos);
}

double dispersion_residual_active_p(const PlateSpec& spec, const CircularGeometry& geom,
                                    double p, const ThetaParam& tp) {
  const Wavenumbers k = factorization_wavenumbers(spec, tp.omega);
  const double xj = k.k_j * geom.epsilon;
  const double xi = k.k_i * geom.epsilon;
  return geom.epsilon * (k.k_j * j_quotient(p, xj) - k.k_i * i_quotient(p, xi));
}

double dispersion_residual_active(const PlateSpec& spec, const CircularGeometry& geom,
                                  const ThetaParam& tp) {
  return dispersion_residual_active_p(spec, geom, 0.0, tp);
}

double complement_wavenumber(const PlateSpec& spec_c, double omega) {
  return std::pow(
      omega * omega * spec_c.density / (spec_c.d1() * spec_c.thickness * spec_c.thickness),
      0.25);
}

double omega_from_complement_wavenumber(const PlateSpec& spec_c, double k) {
  return k * k * spec_c.thickness * std::sqrt(spec_c.d1() / spec_c.density);
}

double dispersion_residual_complement(const PlateSpec& spec_c, double a, double omega) {
  if (!(omega > 0.0)) throw DomainError("dispersion_residual_complement: omega must be > 0");
  if (!(a > 0.0)) throw DomainError("dispersion_residual_complement: radius must be > 0");
  const double x = complement_wavenumber(spec_c, omega) * a;
  return j_quotient(0.0, x) - i_quotient(0.0, x);
}

BoundaryResiduals boundary_residuals(const PlateSpec& spec, const BoundaryBond& bond,
                                     const RadialSamples& mode) {
  if (mode.values.size() < 5) {
    throw NumericalError("boundary_residuals: need at least a 5-point stencil");
  }
  if (!(mode.dr > 0.0)) throw DomainError("boundary_residuals: grid step must be > 0");
  const std::size_t m = mode.values.size() - 1;
  const double h = mode.dr;
  const double rb = mode.radius_at(m);
  double amp = 0.0;
  for (double v : mode.values) amp = std::max(amp, std::abs(v));
  if (amp == 0.0) return BoundaryResiduals{0.0, 0.0};

  auto F = [&](std::size_t back) { return mode.values[m - back]; };
  const double du =
      (25 * F(0) - 48 * F(1) + 36 * F(2) - 16 * F(3) + 3 * F(4)) / (12 * h);
  const double d2u =
      (35 * F(0) - 104 * F(1) + 114 * F(2) - 56 * F(3) + 11 * F(4)) / (12 * h * h);
  const double lap = d2u + du / rb;

  BoundaryResiduals out;
  out.dirichlet = std::abs(F(0)) / amp;
  if (std::isinf(bond.beta)) {
    // Clamped convention: the natural form degenerates to the Neumann trace,
    // made dimensionless with the boundary radius.
    out.natural = std::abs(du) * rb / amp;
  } else {
    const double curvature_term =
        bond.curvature_radius != 0.0
            ? spec.rigidity() * (1.0 - spec.poisson) / bond.curvature_radius
            : 0.0;
    out.natural =
        std::abs((bond.beta - curvature_term) * du + spec.rigidity() * lap) / amp;
  }
  return out;
}

StabilityReport stability_check(const PlateSpec& spec, const BoundaryBond& bond) {
  StabilityReport rep;
  double margin;
  if (std::isinf(bond.beta)) {
    margin = std::numeric_limits<double>::infinity();
  } else {
    const double curvature_term =
        bond.curvature_radius != 0.0
            ? spec.rigidity() * (1.0 - spec.poisson) / bond.curvature_radius
            : 0.0;
    margin = bond.beta - curvature_term;
  }
  if (margin >= 0.0 && spec.tension_q1 == 0.0) {
    rep.classification = Stability::kStable;
    rep.annotation = "bond margin and stretching conditions both hold";
    return rep;
  }
  rep.classification = Stability::kIndeterminate;
  if (margin < 0.0) {
    rep.annotation = "elastic bond below the curvature threshold";
  } else if (spec.tension_q1 <= kDestructionLimitQ1) {
    rep.annotation = "compressing tension below destruction limit";
  } else {
    rep.annotation = "compressing tension above destruction limit";
  }
  return rep;
}

double mode_energy(double nu, double amplitude, double area, double thickness,
                   double density) {
  if (!(nu > 0.0 && area > 0.0 && thickness > 0.0 && density > 0.0)) {
    throw DomainError("mode_energy: nu, area, thickness, density must be > 0");
  }
  if (!(amplitude >= 0.0)) throw DomainError("mode_energy: amplitude must be >= 0");
  const double modal_mass = density * thickness * area / 2.0;
  const double omega = 2.0 * kPi * nu;
  return 0.5 * modal_mass * omega * omega * amplitude * amplitude;
}

double hamiltonian_energy(const PlateSpec& spec, const BoundaryBond& bond,
                          const RadialSamples& mode, const RadialSamples& velocity) {
  const std::size_t n = mode.values.size();
  if (n < 64) throw NumericalError("hamiltonian_energy: radial grid too coarse (< 64)");
  if (velocity.values.size() != n || velocity.dr != mode.dr || velocity.r0 != mode.r0) {
    throw DomainError("hamiltonian_energy: mode and velocity grids must match");
  }
  const double h = mode.dr;
  const double D = spec.rigidity();
  const double Q = spec.tension_q();  // compression magnitude; enters with minus sign
  const GridDerivatives g = derivatives_on_grid(mode.values, h);

  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = mode.radius_at(i);
    // Radial Laplacian; at the axis the symmetric limit is 2 u''(0).
    const double lap = (r == 0.0) ? 2.0 * g.d2[i] : g.d2[i] + g.d1[i] / r;
    const double ut = velocity.values[i];
    integrand[i] = spec.thickness * spec.density * ut * ut + D * lap * lap -
                   Q * g.d1[i] * g.d1[i];
  }
  double area_integral = 0.0;  // trapezoid with the 2 pi r weight
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ra = mode.radius_at(i);
    const double rb = mode.radius_at(i + 1);
    area_integral += 0.5 * h * (2.0 * kPi * ra * integrand[i] + 2.0 * kPi * rb * integrand[i + 1]);
  }
  double energy = 0.5 * area_integral;

  if (!std::isinf(bond.beta)) {
    const std::size_t m = n - 1;
    const double rb = mode.radius_at(m);
    const double curvature_term =
        bond.curvature_radius != 0.0
            ? D * (1.0 - spec.poisson) / bond.curvature_radius
            : 0.0;
    energy += 0.5 * (2.0 * kPi * rb) * (bond.beta - curvature_term) * g.d1[m] * g.d1[m];
  }
  return energy;
}

}  // namespace sgo::plate
