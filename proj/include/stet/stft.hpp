#pragma once

#include <complex>

#include "stet/signal.hpp"
#include "stet/window.hpp"

namespace stet {

enum class GridKind { Stft, Set, Tet, Stet, Stet2, StftDt, StftDw };

const char* grid_kind_name(GridKind kind);

// Complex time-frequency matrix over (frequency bin, time frame). Hop is one
// sample; the frequency grid is omega_k = k * 2*pi*fs/n_fft for
// k = 0..n_fft/2-1, covering [0, pi*fs) for analytic signals.
struct TFGrid {
  Eigen::MatrixXcd values;          // n_freq x n_time
  Eigen::VectorXd time_axis_s;      // n_time
  Eigen::VectorXd freq_axis_rad_s;  // n_freq
  GaussianWindowSpec window;
  GridKind kind = GridKind::Stft;
  int n_fft = 0;

  Eigen::Index n_freq() const { return values.rows(); }
  Eigen::Index n_time() const { return values.cols(); }
  double fs_hz() const { return window.fs_hz; }
  double time_step_s() const { return 1.0 / window.fs_hz; }
  double freq_step_rad_s() const;

  // Frames whose window extends past the record are computed against zero
  // padding; they are flagged via this margin and excluded from interior
  // evaluations.
  int edge_margin() const { return window.half_len; }
  Eigen::Index interior_begin() const;
  Eigen::Index interior_end() const;  // one past the last interior frame
};

// Riemann-sum STFT with window-centered modulation:
//   values[k][n] = sum_m s[n+m] g[m] exp(-i omega_k m dt) dt.
// Requires n_fft >= window length and a signal at least as long as the window.
TFGrid stft(const Signal& s, const GaussianWindowSpec& w, int n_fft);

// Partial derivatives of the STFT surface, computed analytically from the
// derivative and time-weighted windows:
//   dV/dt = -V^{g'} + i omega V^{g},   dV/domega = -i V^{t g}.
TFGrid stft_dt(const Signal& s, const GaussianWindowSpec& w, int n_fft);
TFGrid stft_dw(const Signal& s, const GaussianWindowSpec& w, int n_fft);

// Computes V, dV/dt and dV/domega in one pass (three windowed transforms).
struct StftTriple {
  TFGrid V;
  TFGrid dVt;
  TFGrid dVw;
};
StftTriple stft_with_derivatives(const Signal& s, const GaussianWindowSpec& w, int n_fft);

// Closed-form STFT values for the three reference models; test oracles.
std::complex<double> harmonic_stft_oracle(double amplitude, double omega0_rad_s,
                                          const GaussianWindowSpec& w, double t_s,
                                          double omega_rad_s);
std::complex<double> impulse_stft_oracle(double amplitude, double t0_s,
                                         const GaussianWindowSpec& w, double t_s,
                                         double omega_rad_s);
std::complex<double> lfm_stft_oracle(double amplitude, double phase0_rad,
                                     double omega_start_rad_s, double chirp_rate_rad_s2,
                                     double beta_s2, double t_s, double omega_rad_s);

}  // namespace stet
