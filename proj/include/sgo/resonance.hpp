#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sgo/plate.hpp"

namespace sgo::resonance {

/// A sign-change interval free of known poles.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct RootFindOptions {
  int scan_points = 4096;  // pre-scan grid for sign changes and pole cells
  int max_roots = 64;
  unsigned threads = 1;
  /// Zeros of these callables mark quotient poles; brackets are clipped so
  /// no pole sits strictly inside a reported bracket.
  std::vector<std::function<double(double)>> denominators;
};

/// Sign-change brackets from the pre-scan, clipped at declared pole cells;
/// empty result when nothing crosses. Throws NumericalError on a pole-dense
/// domain.
std::vector<RootBracket> isolate_brackets(const std::function<double(double)>& f,
                                          double lo, double hi,
                                          const RootFindOptions& opts = {});

/// Ordered roots of a continuous-between-poles residual on [lo, hi].
/// Bisection to 1e-3 relative, then secant polishing; candidate brackets
/// where |f| grows toward the sign change are poles and are dropped.
/// Throws NoRootError when no sign change is found and NumericalError when
/// the domain is pole-dense relative to the scan grid.
std::vector<double> find_roots(const std::function<double(double)>& f, double lo, double hi,
                               const RootFindOptions& opts = {});

/// One published-versus-recomputed arithmetic check carried in reports.
struct DiscrepancyCheck {
  std::string id;
  std::string description;
  double published = 0.0;
  double recomputed = 0.0;
  std::string note;
  std::vector<std::pair<std::string, double>> details;
};

struct ResonanceReport {
  std::string tuned_parameter;  // "outer_radius" or "tension_q1"
  double tuned_value = 0.0;
  double target_nu = 0.0;           // Hz
  double nu_active = 0.0;           // Hz, NaN when no active zone given
  double nu_complement = 0.0;       // Hz, NaN when no complement involved
  double mismatch = 0.0;            // |achieved - target| / target
  int mode_index = 0;               // complement root index l
  double asymptotic_prediction = 0.0;  // pi l / k radius estimate, radius tune only
  double theta_at_root = 0.0;          // tension tune only
  std::vector<DiscrepancyCheck> published_checks;
};

/// Lowest eigenfrequency (Hz) of the compressed active zone, from the first
/// root of the Dirichlet-Neumann dispersion residual in omega. A positive
/// nu_hint narrows the scan to a window around it (continuation speed-up);
/// the full scan is the fallback.
double active_ground_frequency(const plate::PlateSpec& spec,
                               const plate::CircularGeometry& geom, double nu_hint = 0.0);

/// Eigenfrequencies (Hz) of the uncompressed complement disc of radius a,
/// root indices 1..count.
std::vector<double> complement_frequencies(const plate::PlateSpec& spec_c, double a,
                                           int count);

/// Choose the outer radius a in [1e5, 1e8] m so the complement's l-th mode
/// lands on target_nu. The report carries the asymptotic prediction
/// a = pi l / k and the published-value checks.
ResonanceReport tune_outer_radius(const plate::PlateSpec& spec_c, double target_nu, int l,
                                  const plate::PlateSpec* active = nullptr,
                                  const plate::CircularGeometry* geom = nullptr);

/// Choose the compression Q1 in (0, destruction limit] so the active zone's
/// ground frequency lands on target_nu (relative tolerance 1e-6). Signals
/// NoRootError with "no resonance below destruction limit" when the target
/// is out of reach.
ResonanceReport tune_tension(const plate::PlateSpec& spec_eps,
                             const plate::CircularGeometry& geom, double target_nu,
                             const plate::PlateSpec* complement = nullptr);

struct ScanRow {
  double q1 = 0.0;
  double nu_eps = 0.0;
  double nu_c = 0.0;
  double mismatch = 0.0;
  bool flagged = false;
  std::string error;  // row-level failure, scan continues
};

/// One row per Q1 grid point: active ground frequency, nearest complement
/// frequency for the geometry's outer radius, and their relative mismatch;
/// rows with mismatch < 1e-3 are flagged resonant.
std::vector<ScanRow> resonance_scan(const plate::PlateSpec& spec_eps,
                                    const plate::PlateSpec& spec_c,
                                    const plate::CircularGeometry& geom,
                                    const std::vector<double>& q1_grid,
                                    unsigned threads = 0);

/// The three arithmetic inconsistencies in the published parameter set
/// (sinh-theta quotient, I0 argument, outer radius), each recomputed from
/// first principles next to the value as printed.
std::vector<DiscrepancyCheck> published_value_checks(const plate::PlateSpec& active,
                                                     const plate::PlateSpec& complement,
                                                     const plate::CircularGeometry& geom,
                                                     double nu0);

}  // namespace sgo::resonance
