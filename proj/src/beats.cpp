#include "sgo/beats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sgo::beats {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Complex = std::complex<double>;

// Secular evaluation without the pole-proximity guard; bisection relies on
// the +-inf limits at the poles.
double secular_raw(const OscillatorSystem& sys, double lambda) {
  double acc = sys.mass_small * lambda - sys.stiffness_small;
  for (std::size_t s = 0; s < sys.mu(); ++s) {
    const double den = sys.stiffnesses_large[s] - sys.masses_large[s] * lambda;
    acc += sys.coupling[s] * sys.coupling[s] / den;
  }
  return acc;
}

struct PoleGroup {
  double value = 0.0;
  double weight = 0.0;                 // sum of b^2 / M over members
  std::vector<std::size_t> members;    // indices into the large oscillator
};

std::vector<PoleGroup> group_poles(const OscillatorSystem& sys) {
  std::vector<std::size_t> order(sys.mu());
  std::iota(order.begin(), order.end(), 0);
  const auto pole = [&](std::size_t i) {
    return sys.stiffnesses_large[i] / sys.masses_large[i];
  };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pole(a) < pole(b); });

  std::vector<PoleGroup> groups;
  for (std::size_t i : order) {
    const double p = pole(i);
    if (!groups.empty() &&
        std::abs(p - groups.back().value) <= 1e-12 * std::max(std::abs(p), std::abs(groups.back().value))) {
      groups.back().members.push_back(i);
    } else {
      PoleGroup g;
      g.value = p;
      g.members.push_back(i);
      groups.push_back(std::move(g));
    }
  }
  for (auto& g : groups) {
    double mean = 0.0;
    for (std::size_t i : g.members) {
      mean += pole(i);
      g.weight += sys.coupling[i] * sys.coupling[i] / sys.masses_large[i];
    }
    g.value = mean / static_cast<double>(g.members.size());
  }
  return groups;
}

// Monotone-branch bisection between known-sign endpoints; never evaluates at
// the endpoints themselves, so poles are safe bracket ends.
double bisect_increasing(const OscillatorSystem& sys, double lo, double hi) {
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (secular_raw(sys, m) < 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double mass_dot(const OscillatorSystem& sys, const std::vector<double>& x,
                const std::vector<double>& y) {
  double acc = sys.mass_small * x[0] * y[0];
  for (std::size_t i = 0; i < sys.mu(); ++i) {
    acc += sys.masses_large[i] * x[i + 1] * y[i + 1];
  }
  return acc;
}

}  // namespace

std::vector<double> OscillatorSystem::poles() const {
  std::vector<double> p(mu());
  for (std::size_t i = 0; i < mu(); ++i) p[i] = stiffnesses_large[i] / masses_large[i];
  return p;
}

void OscillatorSystem::validate() const {
  if (!(mass_small > 0.0) || !(stiffness_small > 0.0)) {
    throw ConfigError("oscillator system: small mass and stiffness must be > 0");
  }
  if (stiffnesses_large.size() != mu() || coupling.size() != mu()) {
    throw ConfigError("oscillator system: masses, stiffnesses, coupling must have equal length");
  }
  for (std::size_t i = 0; i < mu(); ++i) {
    if (!(masses_large[i] > 0.0) || !(stiffnesses_large[i] > 0.0)) {
      throw ConfigError("oscillator system: large masses and stiffnesses must be > 0");
    }
  }
}

OscillatorSystem OscillatorSystem::from_bond_pair(double m, double v, double M, double V,
                                                  double gamma, double Gamma) {
  const double lhs = gamma / m, rhs = Gamma / M;
  if (std::abs(lhs - rhs) > 1e-9 * std::max({std::abs(lhs), std::abs(rhs), 1e-300})) {
    throw ConfigError("bond pair violates gamma/m = Gamma/M");
  }
  if (gamma * Gamma < 0.0) throw ConfigError("bond pair with opposite signs");
  OscillatorSystem sys;
  sys.mass_small = m;
  sys.stiffness_small = v;
  sys.masses_large = {M};
  sys.stiffnesses_large = {V};
  const double b = (gamma < 0 ? -1.0 : 1.0) * std::sqrt(gamma * Gamma);
  sys.coupling = {b};
  sys.validate();
  return sys;
}

TwoOscSpectrum two_osc_exact_spectrum(double lambda_m, double lambda_M, double eps) {
  if (!(lambda_m > 0.0 && lambda_M > 0.0)) {
    throw DomainError("two_osc_exact_spectrum: lambdas must be > 0");
  }
  const double mean = 0.5 * (lambda_m + lambda_M);
  const double delta = 0.5 * (lambda_m - lambda_M);
  const double h = std::hypot(delta, eps);
  return TwoOscSpectrum{mean + h, mean - h};
}

TwoOscApprox two_osc_approx_spectrum(double lambda_m, double lambda_M, double eps) {
  const double delta = 0.5 * (lambda_m - lambda_M);
  if (!(delta > 0.0)) {
    throw DomainError("two_osc_approx_spectrum: requires lambda_m > lambda_M");
  }
  TwoOscApprox out;
  out.weak_coupling = std::abs(eps) <= delta / 3.0;
  const double shift = eps * eps / (2.0 * delta);
  out.lambda_plus = lambda_m + shift;
  out.lambda_minus = lambda_M - shift;
  const TwoOscSpectrum exact = two_osc_exact_spectrum(lambda_m, lambda_M, eps);
  out.residual_plus = out.lambda_plus - exact.lambda_plus;
  out.residual_minus = out.lambda_minus - exact.lambda_minus;
  return out;
}

TwoOscVectors two_osc_eigenvectors(double lambda_m, double lambda_M, double eps) {
  TwoOscVectors out;
  const double delta = 0.5 * (lambda_m - lambda_M);
  // Exact rotation angle of the symmetric 2x2 pencil.
  const double phi = 0.5 * std::atan2(2.0 * eps, 2.0 * delta);
  out.plus_exact = {std::cos(phi), std::sin(phi)};
  out.minus_exact = {-std::sin(phi), std::cos(phi)};
  if (delta == 0.0) {
    out.perturbative_valid = false;
    out.plus_approx = out.plus_exact;
    out.minus_approx = out.minus_exact;
    return out;
  }
  const double r = eps / (2.0 * delta);
  out.plus_approx = {1.0, r};
  out.minus_approx = {-r, 1.0};
  return out;
}

double secular_function(const OscillatorSystem& sys, double lambda) {
  sys.validate();
  for (double p : sys.poles()) {
    if (std::abs(lambda - p) <= 1e-12 * std::max(std::abs(p), 1e-300)) {
      throw PoleError("secular_function: lambda within 1e-12 of pole " + std::to_string(p));
    }
  }
  return secular_raw(sys, lambda);
}

PerturbedSpectrum perturbed_spectrum(const OscillatorSystem& sys) {
  sys.validate();
  const std::size_t mu = sys.mu();
  const double lambda0 = sys.lambda_small();

  const auto groups = group_poles(sys);
  std::vector<double> secular_poles;
  for (const auto& g : groups) {
    if (g.weight > 0.0) secular_poles.push_back(g.value);
  }

  // Gershgorin bounds of the mass-normalized pencil give safe outer brackets.
  double row0 = 0.0;
  double lo = lambda0, hi = lambda0;
  for (std::size_t i = 0; i < mu; ++i) {
    const double off =
        std::abs(sys.coupling[i]) / std::sqrt(sys.mass_small * sys.masses_large[i]);
    row0 += off;
    const double p = sys.stiffnesses_large[i] / sys.masses_large[i];
    lo = std::min(lo, p - off);
    hi = std::max(hi, p + off);
  }
  lo = std::min(lo, lambda0 - row0);
  hi = std::max(hi, lambda0 + row0);
  const double margin = 0.02 * (hi - lo) + 1e-12 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  lo -= margin;
  hi += margin;

  std::vector<std::pair<double, std::vector<double>>> pairs;  // (lambda, mode)

  // Secular roots, one per interval of the pole partition.
  std::vector<double> edges{lo};
  edges.insert(edges.end(), secular_poles.begin(), secular_poles.end());
  edges.push_back(hi);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lambda = bisect_increasing(sys, edges[k], edges[k + 1]);
    std::vector<double> mode(mu + 1);
    mode[0] = 1.0;
    // (V_i - M_i lambda) psi_i + b_i a = 0
    for (std::size_t i = 0; i < mu; ++i) {
      const double den = sys.masses_large[i] * lambda - sys.stiffnesses_large[i];
      mode[i + 1] = sys.coupling[i] / den;
    }
    const double norm = std::sqrt(mass_dot(sys, mode, mode));
    for (auto& c : mode) c /= norm;
    pairs.emplace_back(lambda, std::move(mode));
  }

  // Pole eigenpairs restore the multiplicity lost to merging: vectors with
  // zero small component, supported on the group, orthogonal to the group
  // coupling. For a decoupled group the whole block survives.
  for (const auto& g : groups) {
    const std::size_t c = g.members.size();
    const std::size_t want = (g.weight > 0.0) ? c - 1 : c;
    if (want == 0) continue;
    std::vector<std::vector<double>> basis;  // mass-orthonormal, in group coords
    if (g.weight > 0.0) {
      std::vector<double> w(c);
      for (std::size_t j = 0; j < c; ++j) {
        w[j] = sys.coupling[g.members[j]] / sys.masses_large[g.members[j]];
      }
      basis.push_back(std::move(w));
    }
    auto m_of = [&](std::size_t j) { return sys.masses_large[g.members[j]]; };
    auto gdot = [&](const std::vector<double>& x, const std::vector<double>& y) {
      double acc = 0.0;
      for (std::size_t j = 0; j < c; ++j) acc += m_of(j) * x[j] * y[j];
      return acc;
    };
    if (!basis.empty()) {
      const double n = std::sqrt(gdot(basis[0], basis[0]));
      for (auto& v : basis[0]) v /= n;
    }
    const std::size_t skip = basis.size();
    for (std::size_t cand = 0; cand < c && basis.size() < skip + want; ++cand) {
      std::vector<double> v(c, 0.0);
      v[cand] = 1.0;
      for (const auto& b : basis) {
        const double proj = gdot(v, b);
        for (std::size_t j = 0; j < c; ++j) v[j] -= proj * b[j];
      }
      const double n = std::sqrt(gdot(v, v));
      if (n < 1e-8) continue;
      for (auto& x : v) x /= n;
      basis.push_back(std::move(v));
    }
    if (basis.size() != skip + want) {
      throw NumericalError("perturbed_spectrum: degenerate block basis construction failed");
    }
    for (std::size_t k = skip; k < basis.size(); ++k) {
      std::vector<double> mode(mu + 1, 0.0);
      for (std::size_t j = 0; j < c; ++j) mode[g.members[j] + 1] = basis[k][j];
      pairs.emplace_back(g.value, std::move(mode));
    }
  }

  if (pairs.size() != mu + 1) {
    throw NumericalError("perturbed_spectrum: found " + std::to_string(pairs.size()) +
                         " eigenpairs, expected " + std::to_string(mu + 1));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  PerturbedSpectrum out;
  for (auto& [lambda, mode] : pairs) {
    out.eigenvalues.push_back(lambda);
    out.frequencies.push_back(std::sqrt(lambda));
    out.small_components.push_back(mode[0]);
    out.modes.push_back(std::move(mode));
  }
  return out;
}

CauchyState CauchySolution::state_at(double t) const {
  const std::size_t mu = sys.mu();
  CauchyState s;
  s.large.assign(mu, 0.0);
  s.large_dot.assign(mu, 0.0);
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    const double w = spectrum.frequencies[k];
    const double c = amplitudes[k] * std::cos(w * t + phases[k]);
    const double d = -amplitudes[k] * w * std::sin(w * t + phases[k]);
    const auto& mode = spectrum.modes[k];
    s.u += mode[0] * c;
    s.u_dot += mode[0] * d;
    for (std::size_t i = 0; i < mu; ++i) {
      s.large[i] += mode[i + 1] * c;
      s.large_dot[i] += mode[i + 1] * d;
    }
  }
  return s;
}

CauchySolution solve_cauchy(const OscillatorSystem& sys, const PerturbedSpectrum& spectrum,
                            const CauchyState& initial) {
  sys.validate();
  const std::size_t mu = sys.mu();
  const std::size_t n = mu + 1;
  if (spectrum.modes.size() != n) {
    throw DomainError("solve_cauchy: spectrum is incomplete");
  }
  if (initial.large.size() != mu || initial.large_dot.size() != mu) {
    throw DomainError("solve_cauchy: initial state has wrong dimension");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r; s < n; ++s) {
      const double g = mass_dot(sys, spectrum.modes[r], spectrum.modes[s]);
      const double want = (r == s) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8) {
        throw DomainError("solve_cauchy: spectrum is not mass-orthonormal");
      }
    }
  }

  std::vector<double> u0(n), v0(n);
  u0[0] = initial.u;
  v0[0] = initial.u_dot;
  for (std::size_t i = 0; i < mu; ++i) {
    u0[i + 1] = initial.large[i];
    v0[i + 1] = initial.large_dot[i];
  }

  CauchySolution sol;
  sol.sys = sys;
  sol.spectrum = spectrum;
  sol.amplitudes.resize(n);
  sol.phases.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double c = mass_dot(sys, spectrum.modes[s], u0);
    const double e = -mass_dot(sys, spectrum.modes[s], v0) / spectrum.frequencies[s];
    sol.amplitudes[s] = std::hypot(c, e);
    double phi = (sol.amplitudes[s] > 0.0) ? std::atan2(e, c) : 0.0;
    if (phi < 0.0) phi += 2.0 * kPi;
    sol.phases[s] = phi;
  }
  return sol;
}

double small_energy(const OscillatorSystem& sys, const CauchyState& s) {
  return 0.5 * (sys.mass_small * s.u_dot * s.u_dot + sys.stiffness_small * s.u * s.u);
}

double large_energy(const OscillatorSystem& sys, const CauchyState& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sys.mu(); ++i) {
    acc += sys.masses_large[i] * s.large_dot[i] * s.large_dot[i] +
           sys.stiffnesses_large[i] * s.large[i] * s.large[i];
  }
  return 0.5 * acc;
}

double cross_energy(const OscillatorSystem& sys, const CauchyState& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sys.mu(); ++i) acc += sys.coupling[i] * s.large[i];
  return s.u * acc;
}

double total_energy(const OscillatorSystem& sys, const CauchyState& s) {
  return small_energy(sys, s) + large_energy(sys, s) + cross_energy(sys, s);
}

Complex xi_characteristic(const OscillatorSystem& sys, const CauchyState& s) {
  return Complex(std::sqrt(sys.mass_small) * s.u_dot,
                 std::sqrt(sys.stiffness_small) * s.u);
}

namespace {

// The integral xi-hat of the drive decomposition; exact for any t.
Complex xi_hat(const CauchySolution& sol, double t) {
  const auto& sys = sol.sys;
  const double omega01 = std::sqrt(sys.lambda_small());
  const double sqrt_m = std::sqrt(sys.mass_small);
  Complex hat(0.0, 0.0);
  for (std::size_t s = 0; s < sol.spectrum.eigenvalues.size(); ++s) {
    double drive = 0.0;  // b+ Psi_s U^s
    for (std::size_t i = 0; i < sys.mu(); ++i) {
      drive += sys.coupling[i] * sol.spectrum.modes[s][i + 1];
    }
    drive *= sol.amplitudes[s];
    if (drive == 0.0) continue;
    const double w = sol.spectrum.frequencies[s];
    const double phi = sol.phases[s];
    const double dm = w - omega01;
    const double dp = w + omega01;
    const double half_t = 0.5 * t;
    const double sinc_m = (std::abs(dm) < 1e-300) ? half_t : std::sin(dm * half_t) / dm;
    const double sinc_p = std::sin(dp * half_t) / dp;
    const Complex res = std::exp(Complex(0.0, phi + dm * half_t)) * sinc_m;
    const Complex anti = std::exp(Complex(0.0, -phi - dp * half_t)) * sinc_p;
    hat -= (drive / sqrt_m) * (res + anti);
  }
  return hat;
}

}  // namespace

Complex xi_analytic(const CauchySolution& sol, double t) {
  if (sol.sys.mu() > 2) {
    throw DomainError("xi_analytic: closed form covers mu <= 2");
  }
  const double omega01 = std::sqrt(sol.sys.lambda_small());
  const Complex xi0 = xi_characteristic(sol.sys, sol.state_at(0.0));
  return std::exp(Complex(0.0, omega01 * t)) * (xi0 + xi_hat(sol, t));
}

Complex xi_driven(const CauchySolution& sol, double t) {
  if (sol.sys.mu() > 2) {
    throw DomainError("xi_driven: closed form covers mu <= 2");
  }
  const double omega01 = std::sqrt(sol.sys.lambda_small());
  return std::exp(Complex(0.0, omega01 * t)) * xi_hat(sol, t);
}

EnergySeries energy_series(const CauchySolution& sol, double t0, double t1, std::size_t n) {
  if (n < 2 || !(t1 > t0)) throw DomainError("energy_series: need n >= 2 and t1 > t0");
  EnergySeries es;
  es.t.resize(n);
  es.e_small.resize(n);
  es.e_large.resize(n);
  es.e_total.resize(n);
  es.xi.resize(n);
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const CauchyState s = sol.state_at(t);
    es.t[i] = t;
    es.e_small[i] = small_energy(sol.sys, s);
    es.e_large[i] = large_energy(sol.sys, s);
    es.e_total[i] = total_energy(sol.sys, s);
    es.xi[i] = xi_characteristic(sol.sys, s);
  }
  return es;
}

double windowed_average(const std::vector<double>& t, const std::vector<double>& y,
                        double T, double width) {
  if (t.size() != y.size() || t.size() < 2) {
    throw DomainError("windowed_average: mismatched or short series");
  }
  if (!(width > 0.0)) throw NumericalError("windowed_average: window width must be > 0");
  const double lo = T - 0.5 * width;
  const double hi = T + 0.5 * width;
  if (lo < t.front() || hi > t.back()) {
    throw NumericalError("windowed_average: window outside the sampled range");
  }
  const auto it_lo = std::lower_bound(t.begin(), t.end(), lo);
  const auto it_hi = std::upper_bound(t.begin(), t.end(), hi);
  const std::size_t i0 = static_cast<std::size_t>(it_lo - t.begin());
  const std::size_t i1 = static_cast<std::size_t>(it_hi - t.begin());  // one past
  if (i1 - i0 < 16) {
    throw NumericalError("windowed_average: fewer than 16 samples in the window");
  }
  auto interp = [&](double x) {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t j = static_cast<std::size_t>(it - t.begin());
    j = std::min(std::max<std::size_t>(j, 1), t.size() - 1);
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return y[j - 1] * (1.0 - w) + y[j] * w;
  };
  double integral = 0.0;
  double prev_t = lo, prev_y = interp(lo);
  for (std::size_t i = i0; i < i1; ++i) {
    integral += 0.5 * (t[i] - prev_t) * (y[i] + prev_y);
    prev_t = t[i];
    prev_y = y[i];
  }
  integral += 0.5 * (hi - prev_t) * (interp(hi) + prev_y);
  return integral / width;
}

std::pair<std::vector<double>, std::vector<double>> windowed_series(
    const std::vector<double>& t, const std::vector<double>& y, double width,
    double stride) {
  if (!(stride > 0.0)) throw DomainError("windowed_series: stride must be > 0");
  std::vector<double> centers, averages;
  for (double T = t.front() + 0.5 * width; T + 0.5 * width <= t.back() + 1e-12;
       T += stride) {
    centers.push_back(T);
    averages.push_back(windowed_average(t, y, T, width));
  }
  if (centers.empty()) throw NumericalError("windowed_series: no window fits the series");
  return {std::move(centers), std::move(averages)};
}

namespace {

struct ResonantPair {
  double m1, m2, b, lambda1, pole, dlambda, omega1;
};

ResonantPair resonant_pair(const OscillatorSystem& sys, const char* who) {
  if (sys.mu() != 1) throw DomainError(std::string(who) + ": defined for mu = 1");
  ResonantPair p{};
  p.m1 = sys.mass_small;
  p.m2 = sys.masses_large[0];
  p.b = sys.coupling[0];
  p.lambda1 = sys.lambda_small();
  p.pole = sys.stiffnesses_large[0] / sys.masses_large[0];
  p.dlambda = 0.5 * std::abs(p.lambda1 - p.pole);
  p.omega1 = std::sqrt(p.lambda1);
  return p;
}

}  // namespace

double optimal_window(const OscillatorSystem& sys) {
  const ResonantPair p = resonant_pair(sys, "optimal_window");
  if (p.b == 0.0) throw NumericalError("optimal_window: undefined for zero coupling");
  const double domega = std::abs(std::sqrt(p.pole) - p.omega1);
  if (domega == 0.0) {
    throw NumericalError("optimal_window: undefined at exact tuning (no fast leakage scale)");
  }
  return std::sqrt(4.0 * p.m1 * p.m2 * p.dlambda * p.omega1 / (p.b * p.b * domega));
}

double averaged_energy_estimate(const CauchySolution& sol, double t, bool* valid_regime) {
  const ResonantPair p = resonant_pair(sol.sys, "averaged_energy_estimate");
  if (p.b == 0.0 || p.dlambda == 0.0) {
    throw NumericalError("averaged_energy_estimate: needs b != 0 and a detuned pair");
  }
  if (valid_regime != nullptr) {
    *valid_regime = p.b * p.b <= p.dlambda * p.dlambda * p.m1 * p.m2 / 25.0;
  }
  // Resonant mode: perturbed eigenvalue closest to the small oscillator's.
  std::size_t best = 0;
  for (std::size_t s = 1; s < sol.spectrum.eigenvalues.size(); ++s) {
    if (std::abs(sol.spectrum.eigenvalues[s] - p.lambda1) <
        std::abs(sol.spectrum.eigenvalues[best] - p.lambda1)) {
      best = s;
    }
  }
  const double drive =
      sol.sys.coupling[0] * sol.spectrum.modes[best][1] * sol.amplitudes[best];
  const double wd = p.b * p.b / (4.0 * p.m1 * p.m2 * p.dlambda * p.omega1);
  const double slow = std::sin(wd * t) / wd;
  return drive * drive *
         (2.0 * p.m2 * p.dlambda * p.lambda1 / (p.b * p.b) + slow * slow);
}

double measure_envelope_period(const std::vector<double>& t, const std::vector<double>& e,
                               double smooth_width) {
  if (t.size() != e.size() || t.size() < 8) {
    throw DomainError("measure_envelope_period: series too short");
  }
  const double dt = t[1] - t[0];
  const std::size_t half = static_cast<std::size_t>(
      std::max(0.0, std::round(0.5 * smooth_width / dt)));
  const std::size_t n = t.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i >= half) ? i - half : 0;
    const std::size_t b = std::min(n - 1, i + half);
    double acc = 0.0;
    for (std::size_t j = a; j <= b; ++j) acc += e[j];
    s[i] = acc / static_cast<double>(b - a + 1);
  }
  const double top = *std::max_element(s.begin(), s.end());
  const double bottom = *std::min_element(s.begin(), s.end());
  const double floor_level = bottom + 0.5 * (top - bottom);

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i] >= s[i - 1] && s[i] > s[i + 1] && s[i] > floor_level) {
      // parabolic refinement of the peak position
      const double denom = s[i - 1] - 2.0 * s[i] + s[i + 1];
      const double shift = (denom != 0.0) ? 0.5 * (s[i - 1] - s[i + 1]) / denom : 0.0;
      peaks.push_back(t[i] + shift * dt);
      i += half;  // skip the smoothing width before the next candidate
    }
  }
  if (peaks.size() < 2) {
    throw NumericalError("measure_envelope_period: fewer than two envelope peaks");
  }
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

TransferResult transfer_coefficient(const OscillatorSystem& sys, double initial_energy,
                                    double horizon) {
  sys.validate();
  if (!(initial_energy > 0.0)) {
    throw DomainError("transfer_coefficient: initial energy must be > 0");
  }
  const PerturbedSpectrum spec = perturbed_spectrum(sys);

  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < spec.frequencies.size(); ++s) {
    gap = std::min(gap, spec.frequencies[s + 1] - spec.frequencies[s]);
  }
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw NumericalError("transfer_coefficient: degenerate spectrum has no beat period");
  }
  const double beat_period = 2.0 * kPi / gap;
  if (horizon > 0.0 && horizon < beat_period) {
    throw NumericalError("transfer_coefficient: horizon shorter than one beat period; need >= " +
                         std::to_string(beat_period) + " s");
  }
  if (horizon <= 0.0) horizon = 3.0 * beat_period;

  CauchyState init;
  init.large.assign(sys.mu(), 0.0);
  init.large_dot.assign(sys.mu(), 0.0);
  init.u = std::sqrt(2.0 * initial_energy / sys.stiffness_small);
  const CauchySolution sol = solve_cauchy(sys, spec, init);

  const double t_fast = 2.0 * kPi / spec.frequencies.back();
  const double dt = t_fast / 50.0;
  const std::size_t n = static_cast<std::size_t>(horizon / dt) + 1;
  if (n > 20'000'000) {
    throw NumericalError("transfer_coefficient: beat period too long relative to the fast period");
  }
  const double e_total = total_energy(sys, sol.state_at(0.0));
  const double e_large0 = large_energy(sys, sol.state_at(0.0));
  double e_large_max = e_large0;
  for (std::size_t i = 0; i < n; ++i) {
    const CauchyState s = sol.state_at(static_cast<double>(i) * dt);
    e_large_max = std::max(e_large_max, large_energy(sys, s));
  }
  TransferResult out;
  out.k = (e_large_max - e_large0) / e_total;
  out.beat_period = beat_period;
  out.horizon = horizon;
  return out;
}

}  // namespace sgo::beats
