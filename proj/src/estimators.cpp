#include "stet/estimators.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "stet/errors.hpp"

namespace stet {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Fallback thresholds for the second-order estimator denominators, scaled so
// they sit far below the linear-chirp values at the routing boundary yet far
// above numerical noise. d(t_hat)/domega ~ beta^(4/3) and d(omega_hat)/domega
// ~ beta^(2/3) at |c| = beta^(-2/3).
double eps_d_t_hat_dw(double beta_s2) { return 1e-3 * std::pow(beta_s2, 4.0 / 3.0); }
double eps_d_omega_hat_dw(double beta_s2) { return 1e-3 * std::pow(beta_s2, 2.0 / 3.0); }

void check_same_shape(const TFGrid& a, const TFGrid& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw ConfigError("grids must share dimensions");
  if (a.n_fft != b.n_fft || a.window.fs_hz != b.window.fs_hz)
    throw ConfigError("grids must share axes");
}

double clamp_gd(double t_hat, const Eigen::VectorXd& time_axis) {
  const double t0 = time_axis[0];
  const double t1 = time_axis[time_axis.size() - 1];
  const double span = t1 - t0;
  return std::clamp(t_hat, t0 - span, t1 + span);
}

}  // namespace

BoolArray validity_mask(const TFGrid& V, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  const double vmax = V.values.cwiseAbs().maxCoeff();
  BoolArray mask(V.values.rows(), V.values.cols());
  if (vmax == 0.0) {
    mask.setConstant(false);
    return mask;
  }
  const double floor = gamma * vmax;
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) mask(k, n) = std::abs(V.values(k, n)) > floor;
  return mask;
}

Eigen::MatrixXd if_estimate(const TFGrid& V, const TFGrid& dVt, const BoolArray& mask) {
  check_same_shape(V, dVt);
  if (V.kind != GridKind::Stft || dVt.kind != GridKind::StftDt)
    throw ConfigError("if_estimate expects an STFT grid and its time derivative");
  Eigen::MatrixXd omega_hat = Eigen::MatrixXd::Zero(V.values.rows(), V.values.cols());
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      if (!mask(k, n)) continue;
      // Re(dVt / (i V)) == Im(dVt / V)
      omega_hat(k, n) = (dVt.values(k, n) / V.values(k, n)).imag();
    }
  return omega_hat;
}

Eigen::MatrixXd gd_estimate(const TFGrid& V, const TFGrid& dVw, const BoolArray& mask) {
  check_same_shape(V, dVw);
  if (V.kind != GridKind::Stft || dVw.kind != GridKind::StftDw)
    throw ConfigError("gd_estimate expects an STFT grid and its frequency derivative");
  Eigen::MatrixXd t_hat = Eigen::MatrixXd::Zero(V.values.rows(), V.values.cols());
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      if (!mask(k, n)) continue;
      const double raw = V.time_axis_s[n] - (dVw.values(k, n) / V.values(k, n)).imag();
      t_hat(k, n) = clamp_gd(raw, V.time_axis_s);
    }
  return t_hat;
}

FieldPartials field_partials(const Eigen::MatrixXd& field, const BoolArray& mask,
                             double time_step_s, double freq_step_rad_s) {
  const Eigen::Index rows = field.rows();
  const Eigen::Index cols = field.cols();
  FieldPartials p;
  p.d_dt = Eigen::MatrixXd::Zero(rows, cols);
  p.d_dw = Eigen::MatrixXd::Zero(rows, cols);
  p.mask_dt = BoolArray::Constant(rows, cols, false);
  p.mask_dw = BoolArray::Constant(rows, cols, false);

  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index n = 0; n < cols; ++n) {
      if (!mask(k, n)) continue;
      const bool left = n > 0 && mask(k, n - 1);
      const bool right = n + 1 < cols && mask(k, n + 1);
      if (left && right) {
        p.d_dt(k, n) = (field(k, n + 1) - field(k, n - 1)) / (2.0 * time_step_s);
        p.mask_dt(k, n) = true;
      } else if (right) {
        p.d_dt(k, n) = (field(k, n + 1) - field(k, n)) / time_step_s;
        p.mask_dt(k, n) = true;
      } else if (left) {
        p.d_dt(k, n) = (field(k, n) - field(k, n - 1)) / time_step_s;
        p.mask_dt(k, n) = true;
      }
      const bool below = k > 0 && mask(k - 1, n);
      const bool above = k + 1 < rows && mask(k + 1, n);
      if (below && above) {
        p.d_dw(k, n) = (field(k + 1, n) - field(k - 1, n)) / (2.0 * freq_step_rad_s);
        p.mask_dw(k, n) = true;
      } else if (above) {
        p.d_dw(k, n) = (field(k + 1, n) - field(k, n)) / freq_step_rad_s;
        p.mask_dw(k, n) = true;
      } else if (below) {
        p.d_dw(k, n) = (field(k, n) - field(k - 1, n)) / freq_step_rad_s;
        p.mask_dw(k, n) = true;
      }
    }
  return p;
}

ChirpRateField chirp_rate(const Eigen::MatrixXd& d_omega_hat_dt, const Eigen::MatrixXd& d_t_hat_dt,
                          const BoolArray& mask_dt, double eps_div) {
  const Eigen::Index rows = d_omega_hat_dt.rows();
  const Eigen::Index cols = d_omega_hat_dt.cols();
  ChirpRateField c;
  c.values = Eigen::MatrixXd::Zero(rows, cols);
  c.mask = mask_dt;
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index n = 0; n < cols; ++n) {
      if (!mask_dt(k, n)) continue;
      const double dt_hat = d_t_hat_dt(k, n);
      c.values(k, n) = std::abs(dt_hat) > eps_div
                           ? d_omega_hat_dt(k, n) / dt_hat
                           : std::numeric_limits<double>::infinity();
    }
  return c;
}

SecondOrderField if_estimate2(const EstimatorFields& f) {
  const Eigen::Index rows = f.omega_hat.rows();
  const Eigen::Index cols = f.omega_hat.cols();
  const double eps = eps_d_t_hat_dw(f.beta_s2);
  SecondOrderField out;
  out.values = Eigen::MatrixXd::Zero(rows, cols);
  out.fallback = BoolArray::Constant(rows, cols, false);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index n = 0; n < cols; ++n) {
      if (!f.mask(k, n)) continue;
      if (f.mask_dw(k, n) && std::abs(f.d_t_hat_dw(k, n)) > eps) {
        const double slope = f.d_omega_hat_dw(k, n) / f.d_t_hat_dw(k, n);
        out.values(k, n) = f.omega_hat(k, n) - (f.t_hat(k, n) - f.time_axis_s[n]) * slope;
      } else {
        out.values(k, n) = f.omega_hat(k, n);
        out.fallback(k, n) = true;
      }
    }
  return out;
}

SecondOrderField gd_estimate2(const EstimatorFields& f, const Eigen::VectorXd& freq_axis_rad_s) {
  const Eigen::Index rows = f.t_hat.rows();
  const Eigen::Index cols = f.t_hat.cols();
  const double eps = eps_d_omega_hat_dw(f.beta_s2);
  SecondOrderField out;
  out.values = Eigen::MatrixXd::Zero(rows, cols);
  out.fallback = BoolArray::Constant(rows, cols, false);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index n = 0; n < cols; ++n) {
      if (!f.mask(k, n)) continue;
      if (f.mask_dw(k, n) && std::abs(f.d_omega_hat_dw(k, n)) > eps) {
        const double slope = f.d_t_hat_dw(k, n) / f.d_omega_hat_dw(k, n);
        const double raw = slope * (freq_axis_rad_s[k] - f.omega_hat(k, n)) + f.t_hat(k, n);
        out.values(k, n) = clamp_gd(raw, f.time_axis_s);
      } else {
        out.values(k, n) = f.t_hat(k, n);
        out.fallback(k, n) = true;
      }
    }
  return out;
}

TFGrid rectify_for_set(const TFGrid& V, const EstimatorFields& f) {
  TFGrid out = V;
  const double beta = f.beta_s2;
  const double two_pi_beta = 2.0 * std::numbers::pi * beta;
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      const double c = f.chirp_rate(k, n);
      if (!f.mask(k, n) || !f.mask_chirp(k, n) || !std::isfinite(c)) {
        out.values(k, n) = 0.0;
        continue;
      }
      out.values(k, n) *= std::sqrt(std::complex<double>{1.0, -beta * c} / two_pi_beta);
    }
  return out;
}

TFGrid rectify_for_tet(const TFGrid& V, const EstimatorFields& f) {
  TFGrid out = V;
  const double beta = f.beta_s2;
  // Below this |beta*c| the amplitude factor diverges; such pixels belong to
  // the harmonic branch anyway.
  constexpr double kMinBetaC = 1e-9;
  for (Eigen::Index k = 0; k < V.values.rows(); ++k) {
    const double omega = V.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      const double c = f.chirp_rate(k, n);
      if (!f.mask(k, n) || !f.mask_chirp(k, n) || std::abs(beta * c) <= kMinBetaC) {
        out.values(k, n) = 0.0;
        continue;
      }
      // (i + beta c)/(beta c) == 1 + i/(beta c); the factor tends to 1 as
      // |c| -> Inf, so the Inf sentinel needs no special case. The
      // exp(-i omega t) term re-references the coefficient to the spectrum
      // convention, so a kept ridge pixel carries the component's spectrum
      // value at its bin.
      const std::complex<double> amp = std::sqrt(std::complex<double>{1.0, 1.0 / (beta * c)});
      out.values(k, n) *= amp * std::polar(1.0, -omega * V.time_axis_s[n]);
    }
  }
  return out;
}

EstimatorFields compute_estimator_fields(const TFGrid& V, const TFGrid& dVt, const TFGrid& dVw,
                                         double gamma) {
  check_same_shape(V, dVt);
  check_same_shape(V, dVw);
  EstimatorFields f;
  f.gamma = gamma;
  f.beta_s2 = V.window.beta_s2;
  f.time_axis_s = V.time_axis_s;
  f.freq_axis_rad_s = V.freq_axis_rad_s;
  f.mask = validity_mask(V, gamma);
  f.omega_hat = if_estimate(V, dVt, f.mask);
  f.t_hat = gd_estimate(V, dVw, f.mask);

  const double dt = V.time_step_s();
  const double dw = V.freq_step_rad_s();
  FieldPartials po = field_partials(f.omega_hat, f.mask, dt, dw);
  FieldPartials pt = field_partials(f.t_hat, f.mask, dt, dw);
  f.d_omega_hat_dt = std::move(po.d_dt);
  f.d_omega_hat_dw = std::move(po.d_dw);
  f.d_t_hat_dt = std::move(pt.d_dt);
  f.d_t_hat_dw = std::move(pt.d_dw);
  f.mask_dt = po.mask_dt && pt.mask_dt;
  f.mask_dw = po.mask_dw && pt.mask_dw;

  ChirpRateField c = chirp_rate(f.d_omega_hat_dt, f.d_t_hat_dt, f.mask_dt);
  f.chirp_rate = std::move(c.values);
  f.mask_chirp = std::move(c.mask);

  SecondOrderField o2 = if_estimate2(f);
  f.omega_hat2 = std::move(o2.values);
  f.fallback_if2 = std::move(o2.fallback);
  SecondOrderField t2 = gd_estimate2(f, f.freq_axis_rad_s);
  f.t_hat2 = std::move(t2.values);
  f.fallback_gd2 = std::move(t2.fallback);
  return f;
}

}  // namespace stet
