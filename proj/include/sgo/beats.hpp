#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "sgo/errors.hpp"

namespace sgo::beats {

/// One small oscillator (m, v) coupled to a mu-dimensional diagonal
/// oscillator (M, V) by the real coupling vector b; the block coupling
/// antidiag(b+, b) is symmetric by construction.
struct OscillatorSystem {
  double mass_small = 1.0;
  double stiffness_small = 1.0;
  std::vector<double> masses_large;
  std::vector<double> stiffnesses_large;
  std::vector<double> coupling;

  std::size_t mu() const { return masses_large.size(); }
  double lambda_small() const { return stiffness_small / mass_small; }
  std::vector<double> poles() const;  // V_s / M_s
  void validate() const;

  /// Bond-pair parameterization with the constraint gamma/m = Gamma/M;
  /// stored canonically as b = sign(gamma) sqrt(gamma Gamma).
  static OscillatorSystem from_bond_pair(double m, double v, double M, double V,
                                         double gamma, double Gamma);
};

// -- two-oscillator closed forms (lambda-space, coupling eps) ---------------

struct TwoOscSpectrum {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
};

/// lambda_pm = (lm + lM)/2 +- sqrt([(lm - lM)/2]^2 + eps^2), exact.
TwoOscSpectrum two_osc_exact_spectrum(double lambda_m, double lambda_M, double eps);

struct TwoOscApprox {
  double lambda_plus = 0.0;   // lambda_m + eps^2/(2 delta)
  double lambda_minus = 0.0;  // lambda_M - eps^2/(2 delta)
  double residual_plus = 0.0;   // approx - exact
  double residual_minus = 0.0;
  bool weak_coupling = true;  // eps <= delta/3
};

/// Second-order weak-bond spectrum; valid for eps << delta = (lm - lM)/2.
TwoOscApprox two_osc_approx_spectrum(double lambda_m, double lambda_M, double eps);

struct TwoOscVectors {
  std::array<double, 2> plus_exact{};
  std::array<double, 2> minus_exact{};
  std::array<double, 2> plus_approx{};   // (1, eps/2delta), unnormalized
  std::array<double, 2> minus_approx{};  // (-eps/2delta, 1)
  bool perturbative_valid = true;        // false when delta = 0
};

TwoOscVectors two_osc_eigenvectors(double lambda_m, double lambda_M, double eps);

// -- general mu-oscillator spectrum ------------------------------------------

/// Scalar secular form lambda m - v + sum_s b_s^2 / (V_s - M_s lambda).
/// Roots are the perturbed eigenvalues. Throws PoleError within 1e-12
/// (relative) of a pole V_s / M_s.
double secular_function(const OscillatorSystem& sys, double lambda);

struct PerturbedSpectrum {
  std::vector<double> eigenvalues;           // ascending, mu + 1 of them
  std::vector<double> frequencies;           // omega_s = sqrt(lambda_s)
  std::vector<std::vector<double>> modes;    // mass-orthonormal, [small, large...]
  std::vector<double> small_components;      // a_s = modes[s][0]
};

/// All mu+1 eigenpairs: interlacing-bracketed roots of the secular function,
/// eigenvector tails psi_i = b_i a / (V_i - M_i lambda), mass-orthonormalized.
/// Poles coalesced within 1e-12 relative are merged with summed coupling
/// weight; the lost multiplicity is restored by pole eigenvalues whose
/// eigenvectors span the coupling-orthogonal complement of the merged block.
PerturbedSpectrum perturbed_spectrum(const OscillatorSystem& sys);

// -- Cauchy evolution ---------------------------------------------------------

struct CauchyState {
  double u = 0.0;
  double u_dot = 0.0;
  std::vector<double> large;
  std::vector<double> large_dot;
};

struct CauchySolution {
  OscillatorSystem sys;
  PerturbedSpectrum spectrum;
  std::vector<double> amplitudes;  // U^s >= 0
  std::vector<double> phases;      // in [0, 2 pi)

  CauchyState state_at(double t) const;
};

/// Modal amplitudes and phases from mass-weighted projections of the initial
/// data; the reconstruction at t = 0 reproduces the data to 1e-10. Rejects a
/// spectrum that is not mass-orthonormal.
CauchySolution solve_cauchy(const OscillatorSystem& sys, const PerturbedSpectrum& spectrum,
                            const CauchyState& initial);

// -- energies and the xi characteristic --------------------------------------

double small_energy(const OscillatorSystem& sys, const CauchyState& s);
double large_energy(const OscillatorSystem& sys, const CauchyState& s);
double cross_energy(const OscillatorSystem& sys, const CauchyState& s);
double total_energy(const OscillatorSystem& sys, const CauchyState& s);

/// xi = sqrt(m) u' + i sqrt(v) u, so |xi|^2 = 2 E_small pointwise. For unit
/// mass this coincides with the plain first-order characteristic
/// u' + i omega u up to the energy normalization m/2 vs 1/2.
std::complex<double> xi_characteristic(const OscillatorSystem& sys, const CauchyState& s);

/// Closed-form xi of the small oscillator under the modal drive, resonant
/// and anti-resonant terms included. Solves the same linear equation as the
/// modal solution, so the two agree to rounding. Restricted to mu <= 2.
std::complex<double> xi_analytic(const CauchySolution& sol, double t);

/// Quiescent-start response to the same modal drive: xi(0) = 0, so
/// |xi_driven|^2 carries the near-resonant growth-and-return beat whose
/// envelope the optimal window is designed to preserve.
std::complex<double> xi_driven(const CauchySolution& sol, double t);

struct EnergySeries {
  std::vector<double> t;
  std::vector<double> e_small;
  std::vector<double> e_large;
  std::vector<double> e_total;
  std::vector<std::complex<double>> xi;
};

EnergySeries energy_series(const CauchySolution& sol, double t0, double t1, std::size_t n);

/// Trapezoidal window average of a sampled series over [T - w/2, T + w/2];
/// needs the window inside the samples and at least 16 samples per window.
double windowed_average(const std::vector<double>& t, const std::vector<double>& y,
                        double T, double width);

/// Window centers and averages on a stepwise system of windows of the given
/// width, shifted by stride.
std::pair<std::vector<double>, std::vector<double>> windowed_series(
    const std::vector<double>& t, const std::vector<double>& y, double width,
    double stride);

/// Width balancing slow-envelope drift against fast-term leakage for the
/// mu = 1 resonant pair: Delta* = sqrt(4 m1 m2 dlambda omega1 / (b^2 domega)).
double optimal_window(const OscillatorSystem& sys);

/// Averaged small-oscillator energy estimate for the mu = 1 resonant pair:
///   |b psi U|^2 [ 2 m2 dlambda lambda1 / b^2 + sin^2(wd t)/wd^2 ],
///   wd = b^2 / (4 m1 m2 dlambda omega1).
/// valid_regime reports b^2 <= (dlambda)^2 m1 m2 / 25.
double averaged_energy_estimate(const CauchySolution& sol, double t,
                                bool* valid_regime = nullptr);

/// Dominant beat-envelope period of a sampled energy series, by peak
/// spacing after light smoothing.
double measure_envelope_period(const std::vector<double>& t, const std::vector<double>& e,
                               double smooth_width);

struct TransferResult {
  double k = 0.0;           // in [0, 1]
  double beat_period = 0.0; // 2 pi / min adjacent frequency gap
  double horizon = 0.0;     // simulated span, s
};

/// Fraction of the total energy that migrates onto the large oscillator,
///   k = (max_t E_large(t) - E_large(0)) / E_total,
/// from the modal solution over >= 3 beat periods. A caller-supplied horizon
/// shorter than one beat period is rejected with the required horizon.
TransferResult transfer_coefficient(const OscillatorSystem& sys, double initial_energy,
                                    double horizon = 0.0);

}  // namespace sgo::beats
