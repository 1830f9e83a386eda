#pragma once

#include <Eigen/Dense>

namespace stet {

// Gaussian analysis window g(t) = exp(-t^2/(2*beta)), truncated to an odd
// number of samples 2*half_len+1 centered at t=0. beta is in seconds^2 so
// that chirp rates in rad/s^2 and the beta^(-2/3) routing boundary live in
// one consistent unit system.
struct GaussianWindowSpec {
  double beta_s2 = 0.0;
  int half_len = 0;
  double fs_hz = 0.0;

  int length() const { return 2 * half_len + 1; }
  double sigma_s() const;                                  // sqrt(beta)
  double time_at(int m) const {                            // m in [0, length)
    return static_cast<double>(m - half_len) / fs_hz;
  }
};

// Default truncation keeps the tail at or below this magnitude (~6.07 sigma).
inline constexpr double kWindowTailBound = 1e-8;

// Builds a spec whose truncation edge satisfies the default tail bound.
GaussianWindowSpec make_gaussian_window(double beta_s2, double fs_hz);

// Explicit truncation radius. Rejects half_len values whose edge magnitude
// exceeds the tail bound unless allow_wide_tail is set.
GaussianWindowSpec make_gaussian_window(double beta_s2, double fs_hz, int half_len,
                                        bool allow_wide_tail = false);

Eigen::VectorXd sample_window(const GaussianWindowSpec& spec);   // g
Eigen::VectorXd sample_dwindow(const GaussianWindowSpec& spec);  // g' = (-t/beta) g
Eigen::VectorXd sample_twindow(const GaussianWindowSpec& spec);  // t g

// Closed-form Fourier transform sqrt(2*beta*pi)*exp(-0.5*beta*omega^2).
double frequency_response(const GaussianWindowSpec& spec, double omega_rad_s);

}  // namespace stet
