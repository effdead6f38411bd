#pragma once

#include "sgo/errors.hpp"

namespace sgo::specfun {

/// One Bessel-function evaluation: value and first derivative at (order, z).
struct BesselEval {
  double order = 0.0;
  double argument = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

/// Gamma function for x > 0, Lanczos approximation (relative error < 1e-13).
double gamma_fn(double x);

/// Bessel function of the first kind J_p(z) with J'_p(z), for real order
/// p >= 0 and z >= 0. Ascending power series below the crossover argument,
/// large-argument (Hankel) expansion above it; the two branches agree to
/// 1e-10 at the seam. The derivative satisfies J'_p = J_{p-1} - (p/z) J_p.
BesselEval bessel_j(double order, double z);

/// Modified Bessel function I_p(z) with I'_p(z), p >= 0, z >= 0.
/// Throws OverflowError once e^z is no longer representable; use
/// bessel_i_scaled for large arguments.
BesselEval bessel_i(double order, double z);

/// e^{-z} I_p(z) and e^{-z} I'_p(z); well-defined for any z >= 0.
BesselEval bessel_i_scaled(double order, double z);

/// Singular branch J_{-p}(z) for p in (0,1). Square integrable on a sector,
/// used only as the sectorial defect basis; not part of the regular surface.
BesselEval bessel_j_singular(double order, double z);

/// Singular branch I_{-p}(z) for p in (0,1); sectorial defect basis only.
BesselEval bessel_i_singular(double order, double z);

/// Leading-order large-argument form
///   J_p(z) ~  cos(z - p pi/2 - pi/4) / sqrt(pi z / 2),
///   J'_p(z) ~ -sin(z - p pi/2 - pi/4) / sqrt(pi z / 2).
/// Reproduces hand calculations; not a precision evaluator. The caller owns
/// the validity-range judgment (see asymptotic_j_valid).
BesselEval asymptotic_j(double order, double z);

/// Crude validity predicate for asymptotic_j: leading-order error O(1/z) is
/// small once z clears both the phase scale and the order.
bool asymptotic_j_valid(double order, double z);

// The ring complement needs the four-function basis J, H^1, I, K with
// angular factors; no dispersion system is set up for the annulus here, so
// the two extra functions exist only as named stubs.
BesselEval hankel_h1(double order, double z);
BesselEval macdonald_k(double order, double z);

}  // namespace sgo::specfun
