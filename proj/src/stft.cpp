#include "stet/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "stet/errors.hpp"

namespace stet {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_stft_args(const Signal& s, const GaussianWindowSpec& w, int n_fft) {
  if (w.fs_hz != s.sample_rate_hz)
    throw ConfigError("window and signal sample rates differ");
  if (s.samples.size() < w.length())
    throw ConfigError("signal is shorter than the analysis window");
  if (n_fft < w.length()) throw ConfigError("n_fft must cover the window length");
  if (n_fft % 2 != 0) throw ConfigError("n_fft must be even");
}

TFGrid empty_grid(const Signal& s, const GaussianWindowSpec& w, int n_fft, GridKind kind) {
  TFGrid g;
  g.window = w;
  g.kind = kind;
  g.n_fft = n_fft;
  const Eigen::Index n_time = s.samples.size();
  const Eigen::Index n_freq = n_fft / 2;
  g.values = Eigen::MatrixXcd::Zero(n_freq, n_time);
  g.time_axis_s.resize(n_time);
  for (Eigen::Index n = 0; n < n_time; ++n) g.time_axis_s[n] = s.time_at(n);
  const double dw = 2.0 * std::numbers::pi * s.sample_rate_hz / static_cast<double>(n_fft);
  g.freq_axis_rad_s.resize(n_freq);
  for (Eigen::Index k = 0; k < n_freq; ++k) g.freq_axis_rad_s[k] = dw * static_cast<double>(k);
  return g;
}

// Riemann-sum STFT against one sampled window, window-centered modulation:
// values[k][n] = sum_m s[n+m] win[m] exp(-i omega_k m dt) dt. Samples at
// negative lags wrap to the tail of the FFT buffer, which realizes the
// centered phase convention with a plain forward FFT.
TFGrid windowed_stft(const Signal& s, const GaussianWindowSpec& w, int n_fft,
                     const Eigen::VectorXd& win, GridKind kind) {
  TFGrid g = empty_grid(s, w, n_fft, kind);
  const Eigen::Index n_time = s.samples.size();
  const Eigen::Index n_freq = g.n_freq();
  const int half = w.half_len;
  const double dt = 1.0 / s.sample_rate_hz;

  detail::FftPlan plan(n_fft, detail::FftPlan::Direction::Forward);
  std::vector<std::complex<double>> buf(static_cast<size_t>(n_fft));
  std::vector<std::complex<double>> out(static_cast<size_t>(n_fft));

  for (Eigen::Index frame = 0; frame < n_time; ++frame) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{0.0, 0.0});
    const Eigen::Index lo = std::max<Eigen::Index>(-half, -frame);
    const Eigen::Index hi = std::min<Eigen::Index>(half, n_time - 1 - frame);
    for (Eigen::Index m = lo; m <= hi; ++m) {
      const Eigen::Index slot = m >= 0 ? m : n_fft + m;
      buf[static_cast<size_t>(slot)] = s.samples[frame + m] * win[m + half] * dt;
    }
    plan.execute(buf.data(), out.data());
    for (Eigen::Index k = 0; k < n_freq; ++k) g.values(k, frame) = out[static_cast<size_t>(k)];
  }
  return g;
}

}  // namespace

const char* grid_kind_name(GridKind kind) {
  switch (kind) {
    case GridKind::Stft: return "STFT";
    case GridKind::Set: return "SET";
    case GridKind::Tet: return "TET";
    case GridKind::Stet: return "STET";
    case GridKind::Stet2: return "STET2";
    case GridKind::StftDt: return "dSTFT_t";
    case GridKind::StftDw: return "dSTFT_w";
  }
  return "unknown";
}

double TFGrid::freq_step_rad_s() const {
  return 2.0 * std::numbers::pi * window.fs_hz / static_cast<double>(n_fft);
}

Eigen::Index TFGrid::interior_begin() const {
  return std::min<Eigen::Index>(window.half_len, n_time());
}

Eigen::Index TFGrid::interior_end() const {
  return std::max<Eigen::Index>(interior_begin(), n_time() - window.half_len);
}

TFGrid stft(const Signal& s, const GaussianWindowSpec& w, int n_fft) {
  check_stft_args(s, w, n_fft);
  return windowed_stft(s, w, n_fft, sample_window(w), GridKind::Stft);
}

TFGrid stft_dt(const Signal& s, const GaussianWindowSpec& w, int n_fft) {
  check_stft_args(s, w, n_fft);
  TFGrid v = windowed_stft(s, w, n_fft, sample_window(w), GridKind::Stft);
  TFGrid vd = windowed_stft(s, w, n_fft, sample_dwindow(w), GridKind::StftDt);
  // d/dt of the windowed transform: the window slides (derivative window term)
  // and the centered modulation rotates (i omega term).
  for (Eigen::Index k = 0; k < v.n_freq(); ++k) {
    const std::complex<double> iw = kI * v.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < v.n_time(); ++n)
      vd.values(k, n) = -vd.values(k, n) + iw * v.values(k, n);
  }
  return vd;
}

TFGrid stft_dw(const Signal& s, const GaussianWindowSpec& w, int n_fft) {
  check_stft_args(s, w, n_fft);
  TFGrid vt = windowed_stft(s, w, n_fft, sample_twindow(w), GridKind::StftDw);
  vt.values *= -kI;
  return vt;
}

StftTriple stft_with_derivatives(const Signal& s, const GaussianWindowSpec& w, int n_fft) {
  check_stft_args(s, w, n_fft);
  StftTriple t;
  t.V = windowed_stft(s, w, n_fft, sample_window(w), GridKind::Stft);
  t.dVt = windowed_stft(s, w, n_fft, sample_dwindow(w), GridKind::StftDt);
  for (Eigen::Index k = 0; k < t.V.n_freq(); ++k) {
    const std::complex<double> iw = kI * t.V.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < t.V.n_time(); ++n)
      t.dVt.values(k, n) = -t.dVt.values(k, n) + iw * t.V.values(k, n);
  }
  t.dVw = windowed_stft(s, w, n_fft, sample_twindow(w), GridKind::StftDw);
  t.dVw.values *= -kI;
  return t;
}

std::complex<double> harmonic_stft_oracle(double amplitude, double omega0_rad_s,
                                          const GaussianWindowSpec& w, double t_s,
                                          double omega_rad_s) {
  return amplitude * std::polar(1.0, omega0_rad_s * t_s) *
         frequency_response(w, omega_rad_s - omega0_rad_s);
}

std::complex<double> impulse_stft_oracle(double amplitude, double t0_s,
                                         const GaussianWindowSpec& w, double t_s,
                                         double omega_rad_s) {
  const double lag = t0_s - t_s;
  const double g = std::exp(-lag * lag / (2.0 * w.beta_s2));
  return amplitude * g * std::polar(1.0, -omega_rad_s * lag);
}

std::complex<double> lfm_stft_oracle(double amplitude, double phase0_rad,
                                     double omega_start_rad_s, double chirp_rate_rad_s2,
                                     double beta_s2, double t_s, double omega_rad_s) {
  using cd = std::complex<double>;
  const cd denom{1.0, -beta_s2 * chirp_rate_rad_s2};  // 1 - i beta c
  const double detune = omega_rad_s - omega_start_rad_s - chirp_rate_rad_s2 * t_s;
  const cd amp = amplitude * std::sqrt(2.0 * std::numbers::pi * beta_s2 / denom);
  const double phase = phase0_rad + t_s * (omega_start_rad_s + 0.5 * chirp_rate_rad_s2 * t_s);
  const cd envelope = -detune * detune * beta_s2 / (2.0 * denom);
  return amp * std::exp(cd{0.0, phase} + envelope);
}

}  // namespace stet
