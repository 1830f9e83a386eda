#include "stet/window.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stet/errors.hpp"

namespace stet {

namespace {

void check_window_args(double beta_s2, double fs_hz) {
  if (!std::isfinite(beta_s2) || beta_s2 <= 0.0) throw ConfigError("window beta must be positive");
  if (!std::isfinite(fs_hz) || fs_hz <= 0.0) throw ConfigError("sample rate must be positive");
}

double edge_magnitude(double beta_s2, double fs_hz, int half_len) {
  const double edge_t = static_cast<double>(half_len) / fs_hz;
  return std::exp(-edge_t * edge_t / (2.0 * beta_s2));
}

}  // namespace

double GaussianWindowSpec::sigma_s() const { return std::sqrt(beta_s2); }

GaussianWindowSpec make_gaussian_window(double beta_s2, double fs_hz) {
  check_window_args(beta_s2, fs_hz);
  // Smallest radius whose edge magnitude is at or below the tail bound.
  const double edge_t = std::sqrt(-2.0 * beta_s2 * std::log(kWindowTailBound));
  int half_len = static_cast<int>(std::ceil(edge_t * fs_hz));
  half_len = std::max(half_len, 1);
  return GaussianWindowSpec{beta_s2, half_len, fs_hz};
}

GaussianWindowSpec make_gaussian_window(double beta_s2, double fs_hz, int half_len,
                                        bool allow_wide_tail) {
  check_window_args(beta_s2, fs_hz);
  if (half_len < 1) throw ConfigError("window truncation radius must be at least one sample");
  const double edge = edge_magnitude(beta_s2, fs_hz, half_len);
  if (edge > kWindowTailBound * (1.0 + 1e-12) && !allow_wide_tail)
    throw ConfigError("window tail magnitude " + std::to_string(edge) +
                      " exceeds the truncation bound; pass allow_wide_tail to override");
  return GaussianWindowSpec{beta_s2, half_len, fs_hz};
}

Eigen::VectorXd sample_window(const GaussianWindowSpec& spec) {
  Eigen::VectorXd g(spec.length());
  for (int m = 0; m < spec.length(); ++m) {
    const double t = spec.time_at(m);
    g[m] = std::exp(-t * t / (2.0 * spec.beta_s2));
  }
  return g;
}

Eigen::VectorXd sample_dwindow(const GaussianWindowSpec& spec) {
  Eigen::VectorXd dg(spec.length());
  for (int m = 0; m < spec.length(); ++m) {
    const double t = spec.time_at(m);
    dg[m] = (-t / spec.beta_s2) * std::exp(-t * t / (2.0 * spec.beta_s2));
  }
  return dg;
}

Eigen::VectorXd sample_twindow(const GaussianWindowSpec& spec) {
  Eigen::VectorXd tg(spec.length());
  for (int m = 0; m < spec.length(); ++m) {
    const double t = spec.time_at(m);
    tg[m] = t * std::exp(-t * t / (2.0 * spec.beta_s2));
  }
  return tg;
}

double frequency_response(const GaussianWindowSpec& spec, double omega_rad_s) {
  return std::sqrt(2.0 * spec.beta_s2 * std::numbers::pi) *
         std::exp(-0.5 * spec.beta_s2 * omega_rad_s * omega_rad_s);
}

}  // namespace stet
