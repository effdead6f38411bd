#include "sgo/card.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include "sgo/io.hpp"
#include "sgo/parallel.hpp"

namespace sgo::card {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct WindowSegment {
  std::size_t start = 0;
  std::size_t length = 0;
};

WindowSegment locate_window(const SignalSeries& signal, double window_start_s,
                            double window_hours) {
  if (!(window_hours > 0.0)) throw DomainError("card: window length must be > 0");
  const double w = window_hours * 3600.0;
  const double idx = (window_start_s - signal.t0) / signal.dt;
  const auto start = static_cast<long long>(std::llround(idx));
  const auto length = static_cast<long long>(std::llround(w / signal.dt));
  if (start < 0 || length < 8 ||
      start + length > static_cast<long long>(signal.values.size())) {
    throw NumericalError("card: window outside the signal");
  }
  return WindowSegment{static_cast<std::size_t>(start), static_cast<std::size_t>(length)};
}

// Hann-tapered, mean-removed band power of one segment for the requested
// DFT bins; per-bin evaluation keeps the cost proportional to the band.
std::vector<double> bin_powers(const SignalSeries& signal, const WindowSegment& seg,
                               std::size_t k_lo, std::size_t k_hi) {
  const std::size_t n = seg.length;
  std::vector<double> y(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) mean += signal.values[seg.start + j];
  mean /= static_cast<double>(n);
  double wsum2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(j) /
                                           static_cast<double>(n - 1)));
    y[j] = (signal.values[seg.start + j] - mean) * w;
    wsum2 += w * w;
  }
  std::vector<double> powers(k_hi - k_lo + 1);
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    // rotor recurrence for exp(-2 pi i j k / n)
    const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const std::complex<double> rot(std::cos(ang), std::sin(ang));
    std::complex<double> ph(1.0, 0.0);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      acc += y[j] * ph;
      ph *= rot;
    }
    const bool edge = (k == 0) || (2 * k == n);
    const double one_sided = edge ? 1.0 : 2.0;
    powers[k - k_lo] =
        one_sided * std::norm(acc) / (static_cast<double>(n) * wsum2);
  }
  return powers;
}

}  // namespace

void SignalSeries::validate() const {
  if (!(dt > 0.0)) throw DomainError("signal: sample step must be > 0");
  if (values.size() < 2) throw DomainError("signal: too few samples");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("signal: non-finite sample");
  }
}

SignalSeries synth_sgo(double duration_hours, const std::vector<Mode>& modes,
                       double dt_seconds, double noise_sigma, std::uint64_t seed) {
  if (!(duration_hours > 0.0)) throw DomainError("synth_sgo: duration must be > 0");
  if (!(dt_seconds > 0.0)) throw DomainError("synth_sgo: sample step must be > 0");
  double nu_max = 0.0;
  for (const auto& m : modes) nu_max = std::max(nu_max, m.nu_uhz);
  if (nu_max > 0.0 && 1.0 / dt_seconds < 4.0 * nu_max * 1e-6) {
    throw DomainError("synth_sgo: sample rate below 4x the highest mode frequency");
  }
  SignalSeries s;
  s.t0 = 0.0;
  s.dt = dt_seconds;
  const auto n = static_cast<std::size_t>(duration_hours * 3600.0 / dt_seconds);
  s.values.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s.dt * static_cast<double>(i);
    double v = 0.0;
    for (const auto& m : modes) {
      v += m.amplitude * std::cos(2.0 * kPi * m.nu_uhz * 1e-6 * t + m.phase);
    }
    s.values[i] = v;
  }
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    auto uniform = [&]() {
      return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    };
    for (std::size_t i = 0; i < n; i += 2) {
      // Box-Muller, so the byte stream is pinned by the seed alone.
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      const double a = 2.0 * kPi * uniform();
      s.values[i] += noise_sigma * r * std::cos(a);
      if (i + 1 < n) s.values[i + 1] += noise_sigma * r * std::sin(a);
    }
  }
  return s;
}

double band_amplitude(const SignalSeries& signal, double f_lo_uhz, double f_hi_uhz,
                      double window_start_s, double window_hours) {
  signal.validate();
  if (!(f_hi_uhz > f_lo_uhz) || f_lo_uhz < 0.0) {
    throw DomainError("band_amplitude: bad band");
  }
  const double nyquist_uhz = 0.5 / signal.dt * 1e6;
  if (f_hi_uhz > nyquist_uhz * (1.0 + 1e-12)) {
    throw DomainError("band_amplitude: band beyond Nyquist");
  }
  const WindowSegment seg = locate_window(signal, window_start_s, window_hours);
  const double bin_hz = 1.0 / (static_cast<double>(seg.length) * signal.dt);
  const auto k_lo = static_cast<std::size_t>(
      std::ceil(f_lo_uhz * 1e-6 / bin_hz - 1e-9));
  const auto k_hi_raw = f_hi_uhz * 1e-6 / bin_hz;
  // half-open band [f_lo, f_hi): a bin exactly at f_hi belongs to the next band
  std::size_t k_hi =
      static_cast<std::size_t>(std::floor(k_hi_raw + 1e-9));
  if (std::abs(k_hi_raw - std::round(k_hi_raw)) < 1e-9 && k_hi > 0) k_hi -= 1;
  k_hi = std::min(k_hi, seg.length / 2);
  if (k_hi < k_lo) {
    throw NumericalError("band_amplitude: band contains no DFT bins of this window");
  }
  const auto powers = bin_powers(signal, seg, k_lo, k_hi);
  double a2 = 0.0;
  for (double p : powers) a2 += p;
  return a2;
}

double CardGrid::a2_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : a2) {
    for (double v : row) {
      if (std::isfinite(v)) m = std::min(m, v);
    }
  }
  return std::isfinite(m) ? m : 0.0;
}

double CardGrid::a2_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : a2) {
    for (double v : row) {
      if (std::isfinite(v)) m = std::max(m, v);
    }
  }
  return std::isfinite(m) ? m : 0.0;
}

CardGrid build_card(const SignalSeries& signal, double bin_width_uhz, double window_hours,
                    double stride_minutes, double f_lo_uhz, double f_hi_uhz,
                    unsigned threads) {
  signal.validate();
  if (!(stride_minutes > 0.0)) throw DomainError("build_card: stride must be > 0");
  const double window_s = window_hours * 3600.0;
  const double stride_s = stride_minutes * 60.0;
  if (signal.duration() < window_s) {
    throw NumericalError("build_card: signal shorter than one window");
  }
  const auto n_window = static_cast<std::size_t>(std::llround(window_s / signal.dt));
  const double dft_bin_uhz = 1e6 / (static_cast<double>(n_window) * signal.dt);
  if (bin_width_uhz <= 0.0) bin_width_uhz = dft_bin_uhz;
  const double nyquist_uhz = 0.5 / signal.dt * 1e6;
  if (f_hi_uhz <= 0.0) f_hi_uhz = nyquist_uhz;
  f_hi_uhz = std::min(f_hi_uhz, nyquist_uhz);
  if (!(f_hi_uhz > f_lo_uhz)) throw DomainError("build_card: empty frequency range");

  const auto n_bands = static_cast<std::size_t>(
      std::ceil((f_hi_uhz - f_lo_uhz) / bin_width_uhz - 1e-9));
  const auto n_windows = static_cast<std::size_t>(
      std::floor((signal.duration() - window_s) / stride_s + 1e-9)) + 1;

  CardGrid grid;
  grid.window_hours = window_hours;
  grid.stride_minutes = stride_minutes;
  grid.bin_width_uhz = bin_width_uhz;
  grid.window_centers_hours.resize(n_windows);
  grid.bin_centers_uhz.resize(n_bands);
  for (std::size_t b = 0; b < n_bands; ++b) {
    grid.bin_centers_uhz[b] = f_lo_uhz + (static_cast<double>(b) + 0.5) * bin_width_uhz;
  }
  grid.a2.assign(n_bands, std::vector<double>(n_windows, kNan));

  parallel_for(
      n_windows,
      [&](std::size_t w) {
        const double start = signal.t0 + static_cast<double>(w) * stride_s;
        grid.window_centers_hours[w] = (start + 0.5 * window_s) / 3600.0;
        for (std::size_t b = 0; b < n_bands; ++b) {
          const double lo = f_lo_uhz + static_cast<double>(b) * bin_width_uhz;
          const double hi = std::min(lo + bin_width_uhz, f_hi_uhz);
          try {
            grid.a2[b][w] = band_amplitude(signal, lo, hi, start, window_hours);
          } catch (const NumericalError&) {
            // masked cell
          }
        }
      },
      threads);

  const double lo = grid.a2_min();
  const double hi = grid.a2_max();
  const double step = (hi - lo) / 10.0;
  grid.isolines.resize(11);
  for (int i = 0; i <= 10; ++i) grid.isolines[i] = lo + step * i;
  return grid;
}

std::string card_csv(const CardGrid& grid) {
  // row = frequency bin, column = window center; first column labels the bin
  std::string out = "bin_uhz";
  for (double c : grid.window_centers_hours) {
    out += ',';
    out += io::format_g17(c);
  }
  out += '\n';
  for (std::size_t b = 0; b < grid.bin_centers_uhz.size(); ++b) {
    out += io::format_g17(grid.bin_centers_uhz[b]);
    for (double v : grid.a2[b]) {
      out += ',';
      out += io::format_g17(v);
    }
    out += '\n';
  }
  return out;
}

std::string card_meta_json(const CardGrid& grid) {
  io::JsonWriter jw;
  jw.begin_object();
  jw.key("window_hours").value(grid.window_hours);
  jw.key("stride_minutes").value(grid.stride_minutes);
  jw.key("bin_width_uhz").value(grid.bin_width_uhz);
  jw.key("a2_min").value(grid.a2_min());
  jw.key("a2_max").value(grid.a2_max());
  jw.key("isoline_step").value(grid.isolines.size() == 11 ? grid.isolines[1] - grid.isolines[0]
                                                          : 0.0);
  jw.key("isolines").begin_array();
  for (double v : grid.isolines) jw.value(v);
  jw.end_array();
  jw.key("window_centers_hours").begin_array();
  for (double v : grid.window_centers_hours) jw.value(v);
  jw.end_array();
  jw.key("bin_centers_uhz").begin_array();
  for (double v : grid.bin_centers_uhz) jw.value(v);
  jw.end_array();
  jw.end_object();
  return jw.str() + "\n";
}

std::string card_svg(const CardGrid& grid) {
  const std::size_t nb = grid.bin_centers_uhz.size();
  const std::size_t nw = grid.window_centers_hours.size();
  const int cell = 4;
  const int margin = 40;
  const int width = margin + static_cast<int>(nw) * cell + 10;
  const int height = margin + static_cast<int>(nb) * cell + 10;
  const double lo = grid.a2_min();
  const double step = grid.isolines.size() == 11 ? grid.isolines[1] - grid.isolines[0] : 0.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t w = 0; w < nw; ++w) {
      const double v = grid.a2[b][w];
      int level = 0;
      if (std::isfinite(v) && step > 0.0) {
        level = std::min(10, static_cast<int>((v - lo) / step));
      }
      // dull grey at the background level, white at the maximum
      const int shade = 105 + 15 * level;
      // low frequencies at the bottom
      const int x = margin + static_cast<int>(w) * cell;
      const int y = 5 + static_cast<int>(nb - 1 - b) * cell;
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << shade << ',' << shade << ','
          << shade << ")\"/>\n";
    }
  }
  svg << "<text x=\"" << margin << "\" y=\"" << height - 8
      << "\" font-size=\"10\">time, hours</text>\n";
  svg << "<text x=\"4\" y=\"" << margin
      << "\" font-size=\"10\" transform=\"rotate(90 8,40)\">frequency, uHz</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string signal_csv(const SignalSeries& signal) {
  io::CsvWriter csv({"t_seconds", "displacement_m"});
  for (std::size_t i = 0; i < signal.values.size(); ++i) {
    csv.add_row({signal.t0 + static_cast<double>(i) * signal.dt, signal.values[i]});
  }
  return csv.str();
}

SignalSeries parse_signal_csv(const std::string& content) {
  SignalSeries s;
  std::istringstream in(content);
  std::string line;
  std::vector<double> times;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("t_seconds") != std::string::npos) continue;  // header
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("signal csv: missing comma");
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      s.values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("signal csv: bad number in line: " + line);
    }
  }
  if (times.size() < 2) throw ConfigError("signal csv: too few samples");
  s.t0 = times.front();
  s.dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expect = s.t0 + static_cast<double>(i) * s.dt;
    if (std::abs(times[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      throw ConfigError("signal csv: non-uniform sampling");
    }
  }
  s.validate();
  return s;
}

}  // namespace sgo::card
