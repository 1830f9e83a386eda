#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace stet {

// Uniformly sampled complex time series. Values are immutable by convention:
// every operation returns a new Signal.
struct Signal {
  Eigen::VectorXcd samples;
  double sample_rate_hz = 0.0;
  double start_time_s = 0.0;

  Eigen::Index size() const { return samples.size(); }
  double dt() const { return 1.0 / sample_rate_hz; }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
  double time_at(Eigen::Index n) const { return start_time_s + static_cast<double>(n) / sample_rate_hz; }
};

// Constant-amplitude complex tone A*exp(i*omega0*t).
Signal synth_harmonic(double amplitude, double omega0_rad_s, double duration_s, double fs_hz);

// Discrete unit-area impulse: a single sample of height amplitude*fs at
// round(t0*fs), so that sum(samples)*dt == amplitude.
Signal synth_impulse(double amplitude, double t0_s, double duration_s, double fs_hz);

// Linear chirp A*exp(i*(phase0 + omega_start*t + 0.5*chirp_rate*t^2)).
// The instantaneous frequency omega_start + chirp_rate*t must stay inside
// (0, pi*fs) over the whole record.
Signal synth_lfm(double amplitude, double phase0_rad, double omega_start_rad_s,
                 double chirp_rate_rad_s2, double duration_s, double fs_hz);

// Elementwise sum; all inputs must share sample rate, length and start time.
Signal mix(const std::vector<Signal>& signals);

// Adds complex circular white Gaussian noise scaled to the requested SNR.
// Deterministic per seed.
Signal add_noise(const Signal& s, double snr_db, std::uint64_t seed);

// One-sided-spectrum analytic signal of the real part of the input:
// negative-frequency bins are zeroed, interior positive bins doubled, DC and
// Nyquist kept as-is. The real part of the output equals the input's real
// part; already-analytic inputs pass through unchanged.
Signal to_analytic(const Signal& real_signal);

// Mean squared magnitude.
double signal_power(const Signal& s);

}  // namespace stet
