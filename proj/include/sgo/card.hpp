#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgo/errors.hpp"

namespace sgo::card {

/// Uniformly sampled displacement record, SI units.
struct SignalSeries {
  double t0 = 0.0;  // s
  double dt = 0.0;  // s
  std::vector<double> values;  // m

  double rate() const { return 1.0 / dt; }
  double duration() const { return dt * static_cast<double>(values.size()); }
  void validate() const;
};

struct Mode {
  double nu_uhz = 0.0;      // micro-hertz
  double amplitude = 0.0;   // m
  double phase = 0.0;       // rad
};

/// Sum-of-cosines generator with optional Gaussian noise (own Box-Muller on
/// a seeded mt19937_64, so a seed pins the bytes). Rejects sample rates
/// below 4x the highest mode frequency.
SignalSeries synth_sgo(double duration_hours, const std::vector<Mode>& modes,
                       double dt_seconds = 60.0, double noise_sigma = 0.0,
                       std::uint64_t seed = 0);

/// Mean-square amplitude attributed to the band [f_lo, f_hi) uHz over one
/// window: mean removal, Hann taper, then
///   A^2 = 2 sum_band |X_k|^2 / (N sum w^2)
/// (one-sided; DC and Nyquist bins enter unscaled). A pure in-band tone of
/// amplitude a yields A^2 = a^2/2.
double band_amplitude(const SignalSeries& signal, double f_lo_uhz, double f_hi_uhz,
                      double window_start_s, double window_hours);

/// Time x frequency grid of windowed squared amplitudes.
struct CardGrid {
  std::vector<double> window_centers_hours;
  std::vector<double> bin_centers_uhz;
  std::vector<std::vector<double>> a2;  // [bin][window], m^2; NaN marks a masked cell
  std::vector<double> isolines;         // 11 boundaries, step = (max-min)/10
  double window_hours = 0.0;
  double stride_minutes = 0.0;
  double bin_width_uhz = 0.0;

  double a2_min() const;
  double a2_max() const;
};

/// Sliding-window card: windows of window_hours shifted by stride_minutes,
/// frequency bands of bin_width_uhz (0 picks one DFT bin of the window)
/// covering [f_lo, f_hi] (f_hi = 0 runs to Nyquist).
CardGrid build_card(const SignalSeries& signal, double bin_width_uhz = 0.0,
                    double window_hours = 20.0, double stride_minutes = 30.0,
                    double f_lo_uhz = 0.0, double f_hi_uhz = 0.0, unsigned threads = 0);

/// Grayscale heat map of the grid, shaded between the ten isoline steps from
/// dull grey at the background level to white at the maximum.
std::string card_svg(const CardGrid& grid);

std::string card_csv(const CardGrid& grid);
std::string card_meta_json(const CardGrid& grid);

/// (t_seconds, displacement_m) round trips.
std::string signal_csv(const SignalSeries& signal);
SignalSeries parse_signal_csv(const std::string& content);

}  // namespace sgo::card
