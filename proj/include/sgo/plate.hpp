#pragma once

#include <string>
#include <vector>

#include "sgo/errors.hpp"

namespace sgo::plate {

/// Largest non-destructive tangential compression per unit thickness.
inline constexpr double kDestructionLimitQ1 = 3.0e9;  // kg m^-1 s^-2

/// Physical parameters of one Kirchhoff plate, SI units throughout.
/// tension_q1 stores the magnitude of the tangential compression per unit
/// thickness; the compressing sign convention lives in the operator, not
/// here.
struct PlateSpec {
  double young_modulus = 0.0;  // kg m^-1 s^-2
  double poisson = 0.0;        // dimensionless, in (0,1)
  double density = 0.0;        // kg m^-3
  double thickness = 0.0;      // m
  double tension_q1 = 0.0;     // kg m^-1 s^-2, >= 0

  double d1() const { return young_modulus / (12.0 * (1.0 - poisson * poisson)); }
  double rigidity() const;  // D = d1 * H^3
  double tension_q() const { return tension_q1 * thickness; }
  void validate() const;
};

/// Auxiliary spectral parameter linking compression to frequency through
///   sinh(theta) = Q1 / (2 omega H sqrt(D1 rho)).
struct ThetaParam {
  double theta = 0.0;   // dimensionless, >= 0; zero iff Q1 = 0
  double omega = 0.0;   // rad s^-1
};

ThetaParam theta_from_omega(const PlateSpec& spec, double omega);
double omega_from_theta(const PlateSpec& spec, double theta);

struct CircularGeometry {
  double epsilon = 0.0;       // active-zone radius, m
  double outer_radius = 0.0;  // complement radius a, m
  double area = 0.0;          // m^2, for energy estimates; pi a^2 if zero
  void validate() const;
  double effective_area() const;
};

struct BoundaryBond {
  double beta = 0.0;              // kg m s^-2; +inf selects the clamped convention
  double curvature_radius = 0.0;  // m, signed
};

enum class Parity { kSin, kCos };

struct Wavenumbers {
  double k_j = 0.0;  // m^-1, argument scale of the J-branch
  double k_i = 0.0;  // m^-1, argument scale of the I-branch
};

/// Radial wavenumbers of the factorized compressed operator:
///   k_J = [omega^2 rho / (H^2 D1)]^{1/4} e^{theta/2},
///   k_I = [omega^2 rho / (H^2 D1)]^{1/4} e^{-theta/2}.
Wavenumbers factorization_wavenumbers(const PlateSpec& spec, double omega);

/// Clamped-disc mode shape of the compressed active zone,
///   Psi(r) = J0(k_J r)/J0(k_J eps) - I0(k_I r)/I0(k_I eps),
/// identically zero at r = eps. Throws PoleError when the J normalization
/// denominator is within 1e-12 of zero.
double radial_mode(const PlateSpec& spec, const CircularGeometry& geom,
                   const ThetaParam& tp, double r);

/// Sectorial mode of order p > 0: sin/cos(p phi) times the J_p/I_p radial
/// combination; p = 0 with kCos parity reduces to radial_mode.
double sectorial_mode(const PlateSpec& spec, const CircularGeometry& geom, double p,
                      const ThetaParam& tp, double r, double phi, Parity parity);

/// Dirichlet-Neumann dispersion residual of the compressed disc, scaled by
/// eps to be dimensionless:
///   eps [ k_J J'0(k_J eps)/J0(k_J eps) - k_I I'0(k_I eps)/I0(k_I eps) ].
/// Zero exactly at the eigenfrequencies.
double dispersion_residual_active(const PlateSpec& spec, const CircularGeometry& geom,
                                  const ThetaParam& tp);

/// Same residual with Bessel order p (sectorial zones).
double dispersion_residual_active_p(const PlateSpec& spec, const CircularGeometry& geom,
                                    double p, const ThetaParam& tp);

/// Neumann dispersion residual of the uncompressed complement disc of radius
/// a:  J'0(k a)/J0(k a) - I'0(k a)/I0(k a),  k = (omega^2 rho / (D1 H^2))^{1/4}.
double dispersion_residual_complement(const PlateSpec& spec_c, double a, double omega);

double complement_wavenumber(const PlateSpec& spec_c, double omega);
double omega_from_complement_wavenumber(const PlateSpec& spec_c, double k);

/// Mode samples on a uniform radial grid, r_i = r0 + i dr.
struct RadialSamples {
  double r0 = 0.0;
  double dr = 0.0;
  std::vector<double> values;
  double radius_at(std::size_t i) const { return r0 + static_cast<double>(i) * dr; }
};

struct BoundaryResiduals {
  double dirichlet = 0.0;
  double natural = 0.0;
};

/// One-sided 5-point derivatives at the outer sample evaluate the Dirichlet
/// trace and the beta-natural condition
///   [beta - D(1-sigma)/r] du/dn + D Lap u = 0,
/// both normalized by the max mode amplitude. beta = +inf replaces the
/// natural form by the plain Neumann trace.
BoundaryResiduals boundary_residuals(const PlateSpec& spec, const BoundaryBond& bond,
                                     const RadialSamples& mode);

enum class Stability { kStable, kIndeterminate };

struct StabilityReport {
  Stability classification = Stability::kIndeterminate;
  std::string annotation;
};

/// Mikhlin sufficient condition: stable when beta - D(1-sigma)/r >= 0 and the
/// middle plane is not compressed. Any compression returns indeterminate.
StabilityReport stability_check(const PlateSpec& spec, const BoundaryBond& bond);

/// Single-mode elastic energy with the modal-mass convention
/// m_eff = rho H A / 2 (mean square of a sinusoidal shape):
///   E = 1/2 (rho H A / 2) (2 pi nu)^2 amplitude^2.
/// The naive 1/2 rho H A convention is twice as large.
double mode_energy(double nu, double amplitude, double area, double thickness,
                   double density);

/// Quadrature of the Hamiltonian for a centrally symmetric mode on a uniform
/// radial grid (>= 64 points):
///   1/2 Int [ H rho u_t^2 + D (Lap u)^2 - Q1 H (u')^2 ] dOmega
///   + 1/2 Int_Gamma [ beta - D(1-sigma)/r ] (du/dn)^2 dGamma,
/// trapezoidal in r with the 2 pi r weight.
double hamiltonian_energy(const PlateSpec& spec, const BoundaryBond& bond,
                          const RadialSamples& mode, const RadialSamples& velocity);

}  // namespace sgo::plate
