#include "stet/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "stet/errors.hpp"

namespace stet {

namespace {

Eigen::Index sample_count(double duration_s, double fs_hz) {
  const double n = duration_s * fs_hz;
  if (!std::isfinite(n) || n < 1.0) throw ConfigError("record must contain at least one sample");
  return static_cast<Eigen::Index>(std::llround(n));
}

void check_generator_args(double amplitude, double duration_s, double fs_hz) {
  if (!std::isfinite(fs_hz) || fs_hz <= 0.0) throw ConfigError("sample rate must be positive");
  if (!std::isfinite(duration_s) || duration_s <= 0.0) throw ConfigError("duration must be positive");
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw ConfigError("amplitude must be non-negative");
}

// Shared sampling loop so that a zero chirp rate reproduces the harmonic
// generator bit for bit.
Signal sampled_chirp(double amplitude, double phase0, double omega_start, double chirp_rate,
                     Eigen::Index n, double fs_hz) {
  Signal s;
  s.sample_rate_hz = fs_hz;
  s.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs_hz;
    s.samples[i] = std::polar(amplitude, phase0 + t * (omega_start + 0.5 * chirp_rate * t));
  }
  return s;
}

}  // namespace

Signal synth_harmonic(double amplitude, double omega0_rad_s, double duration_s, double fs_hz) {
  check_generator_args(amplitude, duration_s, fs_hz);
  if (!(fs_hz > omega0_rad_s / std::numbers::pi))
    throw ConfigError("tone frequency violates the Nyquist limit");
  return sampled_chirp(amplitude, 0.0, omega0_rad_s, 0.0, sample_count(duration_s, fs_hz), fs_hz);
}

Signal synth_impulse(double amplitude, double t0_s, double duration_s, double fs_hz) {
  if (!std::isfinite(fs_hz) || fs_hz <= 0.0) throw ConfigError("sample rate must be positive");
  if (!std::isfinite(duration_s) || duration_s <= 0.0) throw ConfigError("duration must be positive");
  if (!std::isfinite(amplitude)) throw ConfigError("amplitude must be finite");
  if (!(t0_s >= 0.0) || !(t0_s < duration_s))
    throw ConfigError("impulse time " + std::to_string(t0_s) + " s lies outside the record");
  const Eigen::Index n = sample_count(duration_s, fs_hz);
  Signal s;
  s.sample_rate_hz = fs_hz;
  s.samples = Eigen::VectorXcd::Zero(n);
  Eigen::Index idx = static_cast<Eigen::Index>(std::llround(t0_s * fs_hz));
  idx = std::min(idx, n - 1);
  // Height amplitude*fs makes the sample sequence integrate (sum * dt) to
  // amplitude, so the closed-form impulse STFT holds with Riemann scaling.
  s.samples[idx] = amplitude * fs_hz;
  return s;
}

Signal synth_lfm(double amplitude, double phase0_rad, double omega_start_rad_s,
                 double chirp_rate_rad_s2, double duration_s, double fs_hz) {
  check_generator_args(amplitude, duration_s, fs_hz);
  if (!std::isfinite(phase0_rad) || !std::isfinite(omega_start_rad_s) ||
      !std::isfinite(chirp_rate_rad_s2))
    throw ConfigError("chirp parameters must be finite");
  const double band = std::numbers::pi * fs_hz;
  // The instantaneous frequency is linear in time, so checking both record
  // ends bounds the whole sweep.
  for (double t : {0.0, duration_s}) {
    const double omega_t = omega_start_rad_s + chirp_rate_rad_s2 * t;
    if (!(omega_t > 0.0) || !(omega_t < band))
      throw ConfigError("instantaneous frequency leaves (0, pi*fs) at t = " + std::to_string(t) +
                        " s");
  }
  return sampled_chirp(amplitude, phase0_rad, omega_start_rad_s, chirp_rate_rad_s2,
                       sample_count(duration_s, fs_hz), fs_hz);
}

Signal mix(const std::vector<Signal>& signals) {
  if (signals.empty()) throw ConfigError("mix requires at least one signal");
  Signal out = signals.front();
  for (size_t i = 1; i < signals.size(); ++i) {
    const Signal& s = signals[i];
    if (s.sample_rate_hz != out.sample_rate_hz || s.samples.size() != out.samples.size() ||
        s.start_time_s != out.start_time_s)
      throw ConfigError("mix requires identical sample rate, length and start time");
    out.samples += s.samples;
  }
  return out;
}

Signal add_noise(const Signal& s, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw ConfigError("SNR must be finite");
  const double p_signal = signal_power(s);
  Signal out = s;
  if (p_signal == 0.0) return out;
  const double p_noise = p_signal * std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(p_noise / 2.0);  // per real/imag component
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out.samples[i] += std::complex<double>(sigma * re, sigma * im);
  }
  return out;
}

Signal to_analytic(const Signal& real_signal) {
  const Eigen::Index n = real_signal.samples.size();
  Signal out = real_signal;
  if (n == 0) return out;
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = std::complex<double>(real_signal.samples[i].real(), 0.0);
  Eigen::VectorXcd spec = detail::fft(x);
  // One-sided mask: DC (and Nyquist for even n) kept, interior positive bins
  // doubled, negative bins zeroed. Preserves the real part exactly and leaves
  // already-analytic inputs unchanged.
  const Eigen::Index half = n / 2;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (k < half || (k == half && n % 2 == 1)) {
      spec[k] *= 2.0;
    } else if (k == half && n % 2 == 0) {
      // Nyquist bin kept as-is.
    } else {
      spec[k] = 0.0;
    }
  }
  out.samples = detail::ifft(spec);
  return out;
}

double signal_power(const Signal& s) {
  if (s.samples.size() == 0) return 0.0;
  return s.samples.squaredNorm() / static_cast<double>(s.samples.size());
}

}  // namespace stet
