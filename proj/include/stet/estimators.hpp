#pragma once

#include "stet/stft.hpp"

namespace stet {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Validity threshold relative to max|V|: below it the division by V inside
// the estimators amplifies noise.
inline constexpr double kDefaultGamma = 1e-3;

// |d t_hat/dt| (dimensionless) at or below this routes to the infinite-chirp
// branch.
inline constexpr double kChirpDivEps = 1e-6;

// Per-pixel estimator fields over one STFT grid. Masked-off pixels hold
// zeros and must not be consumed downstream.
struct EstimatorFields {
  Eigen::MatrixXd omega_hat;       // IF estimate, rad/s
  Eigen::MatrixXd t_hat;           // GD estimate, s
  Eigen::MatrixXd d_omega_hat_dt;  // rad/s^2
  Eigen::MatrixXd d_omega_hat_dw;  // dimensionless
  Eigen::MatrixXd d_t_hat_dt;      // dimensionless
  Eigen::MatrixXd d_t_hat_dw;      // s^2/rad
  Eigen::MatrixXd chirp_rate;      // rad/s^2, +Inf sentinel on the impulsive branch
  Eigen::MatrixXd omega_hat2;      // second-order IF estimate, rad/s
  Eigen::MatrixXd t_hat2;          // second-order GD estimate, s
  BoolArray mask;                  // |V| > gamma*max|V|
  BoolArray mask_dt;               // time-direction partials defined
  BoolArray mask_dw;               // frequency-direction partials defined
  BoolArray mask_chirp;            // chirp rate defined (finite or Inf sentinel)
  BoolArray fallback_if2;          // omega_hat2 fell back to omega_hat
  BoolArray fallback_gd2;          // t_hat2 fell back to t_hat
  Eigen::VectorXd time_axis_s;     // copied from the source grid
  Eigen::VectorXd freq_axis_rad_s;
  double gamma = kDefaultGamma;
  double beta_s2 = 0.0;            // window parameter, used by the rectifiers
};

BoolArray validity_mask(const TFGrid& V, double gamma = kDefaultGamma);

// IF estimator Re(dV/dt / (i V)) on the valid mask; zero elsewhere.
Eigen::MatrixXd if_estimate(const TFGrid& V, const TFGrid& dVt, const BoolArray& mask);

// GD estimator t - Im(dV/domega / V) on the valid mask; zero elsewhere.
// Clamped to [t_min - T, t_max + T] for record length T.
Eigen::MatrixXd gd_estimate(const TFGrid& V, const TFGrid& dVw, const BoolArray& mask);

// Centered differences of a field along time and frequency, one-sided at
// mask boundaries. A pixel with no valid neighbor in a direction is masked
// for that direction's partial.
struct FieldPartials {
  Eigen::MatrixXd d_dt;
  Eigen::MatrixXd d_dw;
  BoolArray mask_dt;
  BoolArray mask_dw;
};
FieldPartials field_partials(const Eigen::MatrixXd& field, const BoolArray& mask,
                             double time_step_s, double freq_step_rad_s);

// Chirp rate d(omega_hat)/dt / d(t_hat)/dt with a +Inf sentinel where the
// denominator is below eps_div. Inf compares greater than any finite routing
// boundary, which sends those pixels to the transient branch.
struct ChirpRateField {
  Eigen::MatrixXd values;
  BoolArray mask;
};
ChirpRateField chirp_rate(const Eigen::MatrixXd& d_omega_hat_dt,
                          const Eigen::MatrixXd& d_t_hat_dt, const BoolArray& mask_dt,
                          double eps_div = kChirpDivEps);

// Second-order estimators; exact for linear chirps. Where the denominator
// partial vanishes the first-order value is kept and the pixel flagged.
struct SecondOrderField {
  Eigen::MatrixXd values;
  BoolArray fallback;
};
SecondOrderField if_estimate2(const EstimatorFields& f);
SecondOrderField gd_estimate2(const EstimatorFields& f, const Eigen::VectorXd& freq_axis_rad_s);

// Amplitude-rectified STFT for the harmonic branch:
//   V * sqrt((1 - i*beta*c) / (2*pi*beta)).
// On a linear-chirp ridge the rectified coefficient equals the time signal.
// Pixels with non-finite chirp are zeroed.
TFGrid rectify_for_set(const TFGrid& V, const EstimatorFields& f);

// Amplitude- and phase-rectified STFT for the impulsive branch:
//   V * sqrt((i + beta*c) / (beta*c)) * exp(-i*omega*t).
// On a group-delay ridge the rectified coefficient equals the signal's
// spectrum at that frequency. Pixels with near-zero chirp are zeroed; the
// amplitude factor tends to 1 on the Inf-chirp branch.
TFGrid rectify_for_tet(const TFGrid& V, const EstimatorFields& f);

// Runs the full estimator chain over one grid triple.
EstimatorFields compute_estimator_fields(const TFGrid& V, const TFGrid& dVt,
                                         const TFGrid& dVw, double gamma = kDefaultGamma);

}  // namespace stet
