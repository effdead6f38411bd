#include "sgo/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sgo::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Crossover between the ascending series and the large-argument expansion.
// The Hankel expansion needs z comfortably above the order before its first
// coefficients decay, so the seam moves up with |p|.
double series_limit_j(double p) { return std::max(12.0, 1.6 * std::abs(p) + 4.0); }
double series_limit_i(double p) { return std::max(15.0, 1.6 * std::abs(p) + 4.0); }

// Ascending series of J_mu (kind = -1) or I_mu (kind = +1) for mu > -1.
// Extended precision keeps the alternating J series usable through the seam,
// where the largest term exceeds the sum by several orders of magnitude.
long double ascending_series(double mu, double z, int kind) {
  const long double zl = z;
  const long double mul = mu;
  const long double x = static_cast<long double>(kind) * zl * zl / 4.0L;
  long double term = std::pow(zl / 2.0L, mul) / std::tgamma(mul + 1.0L);
  long double sum = term;
  long double tmax = std::fabs(term);
  for (int k = 1; k < 600; ++k) {
    term *= x / (static_cast<long double>(k) * (static_cast<long double>(k) + mul));
    sum += term;
    tmax = std::max(tmax, std::fabs(term));
    if (std::fabs(term) < 1e-24L * tmax) break;
  }
  return sum;
}

// Hankel large-argument expansion of J_mu, terms taken to the smallest one.
long double hankel_j(double mu, double z) {
  const long double zl = z;
  const long double mu2 = 4.0L * static_cast<long double>(mu) * mu;
  long double term = 1.0L;
  long double p_sum = 1.0L;  // even terms, alternating
  long double q_sum = 0.0L;  // odd terms, alternating
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k <= 200; ++k) {
    const long double f = 2.0L * k - 1.0L;
    term *= (mu2 - f * f) / (8.0L * k * zl);
    if (std::fabs(term) >= prev) break;  // divergent tail reached
    prev = std::fabs(term);
    const long double s = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      p_sum += s * term;
    } else {
      q_sum += s * term;
    }
    if (prev < 1e-20L) break;
  }
  const long double pil = 3.141592653589793238462643383279503L;
  const long double chi = zl - static_cast<long double>(mu) * (pil / 2) - pil / 4;
  return std::sqrt(2.0L / (pil * zl)) * (p_sum * std::cos(chi) - q_sum * std::sin(chi));
}

// Scaled large-argument expansion e^{-z} I_mu(z).
long double asym_i_scaled(double mu, double z) {
  const long double zl = z;
  const long double mu2 = 4.0L * static_cast<long double>(mu) * mu;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k <= 200; ++k) {
    const long double f = 2.0L * k - 1.0L;
    term *= -(mu2 - f * f) / (8.0L * k * zl);
    if (std::fabs(term) >= prev) break;
    prev = std::fabs(term);
    sum += term;
    if (prev < 1e-22L) break;
  }
  const long double pil = 3.141592653589793238462643383279503L;
  return sum / std::sqrt(2.0L * pil * zl);
}

// J_mu(z) for any order mu > -1, z > 0.
double eval_j(double mu, double z) {
  if (z <= series_limit_j(mu)) return static_cast<double>(ascending_series(mu, z, -1));
  return static_cast<double>(hankel_j(mu, z));
}

// e^{-z} I_mu(z) for mu > -1, z > 0.
double eval_i_scaled(double mu, double z) {
  if (z <= series_limit_i(mu)) {
    return static_cast<double>(ascending_series(mu, z, +1) *
                               std::exp(-static_cast<long double>(z)));
  }
  return static_cast<double>(asym_i_scaled(mu, z));
}

void check_regular_args(double order, double z, const char* name) {
  if (!(order >= 0.0)) throw DomainError(std::string(name) + ": order must be >= 0");
  if (!(z >= 0.0)) throw DomainError(std::string(name) + ": argument must be >= 0");
}

// Value/derivative at z = 0 for the regular branches (shared by J and I up
// to the sign of J'_1, which both give +1/2 at the origin).
BesselEval origin_eval(double p) {
  BesselEval e{p, 0.0, 0.0, 0.0};
  if (p == 0.0) {
    e.value = 1.0;
    e.derivative = 0.0;
  } else if (p == 1.0) {
    e.value = 0.0;
    e.derivative = 0.5;
  } else if (p < 1.0) {
    e.value = 0.0;
    e.derivative = std::numeric_limits<double>::infinity();
  } else {
    e.value = 0.0;
    e.derivative = 0.0;
  }
  return e;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: requires x > 0");
  // Lanczos, g = 7, 9 coefficients.
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the approximation on its accurate half-line.
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  const double xx = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (xx + i);
  const double t = xx + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, xx + 0.5) * std::exp(-t) * a;
}

BesselEval bessel_j(double order, double z) {
  check_regular_args(order, z, "bessel_j");
  if (z == 0.0) return origin_eval(order);
  BesselEval e{order, z, eval_j(order, z), 0.0};
  // J'_p = J_{p-1} - (p/z) J_p; for p = 0 this is -J_1.
  if (order == 0.0) {
    e.derivative = -eval_j(1.0, z);
  } else {
    e.derivative = eval_j(order - 1.0, z) - (order / z) * e.value;
  }
  return e;
}

BesselEval bessel_i_scaled(double order, double z) {
  check_regular_args(order, z, "bessel_i_scaled");
  if (z == 0.0) return origin_eval(order);
  BesselEval e{order, z, eval_i_scaled(order, z), 0.0};
  if (order == 0.0) {
    e.derivative = eval_i_scaled(1.0, z);
  } else {
    e.derivative = eval_i_scaled(order - 1.0, z) - (order / z) * e.value;
  }
  return e;
}

BesselEval bessel_i(double order, double z) {
  check_regular_args(order, z, "bessel_i");
  if (z == 0.0) return origin_eval(order);
  BesselEval e = bessel_i_scaled(order, z);
  if (z > 705.0) {
    throw OverflowError("bessel_i: unscaled value exceeds double range at z = " +
                        std::to_string(z) + "; use bessel_i_scaled");
  }
  const double s = std::exp(z);
  e.value *= s;
  e.derivative *= s;
  return e;
}

BesselEval bessel_j_singular(double order, double z) {
  if (!(order > 0.0 && order < 1.0)) {
    throw DomainError("bessel_j_singular: order must be in (0,1)");
  }
  if (!(z > 0.0)) throw DomainError("bessel_j_singular: argument must be > 0");
  const double mu = -order;
  BesselEval e{mu, z, eval_j(mu, z), 0.0};
  // mu - 1 < -1 here, so step the recurrence up: J'_mu = (mu/z) J_mu - J_{mu+1}.
  e.derivative = (mu / z) * e.value - eval_j(mu + 1.0, z);
  return e;
}

BesselEval bessel_i_singular(double order, double z) {
  if (!(order > 0.0 && order < 1.0)) {
    throw DomainError("bessel_i_singular: order must be in (0,1)");
  }
  if (!(z > 0.0)) throw DomainError("bessel_i_singular: argument must be > 0");
  const double mu = -order;
  BesselEval e{mu, z, static_cast<double>(ascending_series(mu, z, +1)), 0.0};
  // I'_mu = (mu/z) I_mu + I_{mu+1}
  e.derivative = (mu / z) * e.value + static_cast<double>(ascending_series(mu + 1.0, z, +1));
  return e;
}

BesselEval asymptotic_j(double order, double z) {
  if (!(z > 0.0)) throw DomainError("asymptotic_j: argument must be > 0");
  const double chi = z - order * (kPi / 2) - kPi / 4;
  const double amp = 1.0 / std::sqrt(kPi * z / 2.0);
  return BesselEval{order, z, std::cos(chi) * amp, -std::sin(chi) * amp};
}

bool asymptotic_j_valid(double order, double z) { return z >= 2.0 + order; }

BesselEval hankel_h1(double order, double z) {
  (void)order;
  (void)z;
  throw NotImplementedError(
      "hankel_h1: annular basis stub; the ring dispersion system is not set up");
}

BesselEval macdonald_k(double order, double z) {
  (void)order;
  (void)z;
  throw NotImplementedError(
      "macdonald_k: annular basis stub; the ring dispersion system is not set up");
}

}  // namespace sgo::specfun
