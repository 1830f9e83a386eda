#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "stet/errors.hpp"
#include "stet/estimators.hpp"
#include "test_helpers.hpp"

using namespace stet;
using namespace stet::testing;
constexpr double kPi = std::numbers::pi;

namespace {

constexpr double kFs = 2000.0;
constexpr double kDur = 0.5;
constexpr double kBeta = 1e-4;

Scene tone_scene() { return make_scene(synth_harmonic(1.0, 2.0 * kPi * 300.0, kDur, kFs), kBeta); }
Scene impulse_scene() { return make_scene(synth_impulse(1.0, 0.25, kDur, kFs), kBeta); }
Scene lfm_scene(double b_hz = 150.0, double c_hz_s = 200.0) {
  return make_scene(synth_lfm(1.0, 0.4, 2.0 * kPi * b_hz, 2.0 * kPi * c_hz_s, kDur, kFs), kBeta);
}

// Valid interior pixels away from the top/bottom rows.
std::vector<Pixel> valid_interior(const Scene& sc) {
  std::vector<Pixel> out;
  for (Eigen::Index k = 1; k < sc.V.n_freq() - 1; ++k)
    for (Eigen::Index n = sc.V.interior_begin(); n < sc.V.interior_end(); ++n)
      if (sc.fields.mask(k, n)) out.push_back({k, n});
  return out;
}

}  // namespace

TEST_CASE("IF estimate: constant tone frequency everywhere valid") {
  const Scene sc = tone_scene();
  const double omega0 = 2.0 * kPi * 300.0;
  const auto pixels = valid_interior(sc);
  REQUIRE(pixels.size() > 1000);
  for (const auto& [k, n] : pixels)
    CHECK(std::abs(sc.fields.omega_hat(k, n) - omega0) < sc.V.freq_step_rad_s() / 10.0);
}

TEST_CASE("IF estimate: impulse points at the pixel's own frequency") {
  const Scene sc = impulse_scene();
  const auto pixels = valid_interior(sc);
  REQUIRE(pixels.size() > 1000);
  for (const auto& [k, n] : pixels)
    CHECK(std::abs(sc.fields.omega_hat(k, n) - sc.V.freq_axis_rad_s[k]) <
          sc.V.freq_step_rad_s() / 10.0);
}

TEST_CASE("IF estimate: linear chirp closed form") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const double bc2 = kBeta * kBeta * c * c;
  for (const auto& [k, n] : valid_interior(sc)) {
    const double detune = sc.V.freq_axis_rad_s[k] - b - c * sc.V.time_axis_s[n];
    const double want = b + c * sc.V.time_axis_s[n] + bc2 * detune / (1.0 + bc2);
    CHECK(rel_err(sc.fields.omega_hat(k, n), want) < 1e-2);
  }
}

TEST_CASE("GD estimate: impulse time everywhere valid") {
  const Scene sc = impulse_scene();
  const auto pixels = valid_interior(sc);
  for (const auto& [k, n] : pixels)
    CHECK(std::abs(sc.fields.t_hat(k, n) - 0.25) < sc.V.time_step_s() / 10.0);
}

TEST_CASE("GD estimate: tone points at the pixel's own time") {
  const Scene sc = tone_scene();
  for (const auto& [k, n] : valid_interior(sc))
    CHECK(std::abs(sc.fields.t_hat(k, n) - sc.V.time_axis_s[n]) < sc.V.time_step_s() / 10.0);
}

TEST_CASE("GD estimate: linear chirp closed form") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const double bc2 = kBeta * kBeta * c * c;
  for (const auto& [k, n] : valid_interior(sc)) {
    const double gd = (sc.V.freq_axis_rad_s[k] - b) / c;
    const double want = (bc2 / (1.0 + bc2)) * gd + sc.V.time_axis_s[n] / (1.0 + bc2);
    // the grid spans half a second; compare on the time scale of the record
    CHECK(std::abs(sc.fields.t_hat(k, n) - want) < 1e-2 * kDur);
  }
}

TEST_CASE("field partials: linear chirp closed forms") {
  const double c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const double bc2 = kBeta * kBeta * c * c;
  std::vector<double> dwdt, dtdt, dwdw, dtdw;
  for (const auto& [k, n] : valid_interior(sc)) {
    if (!sc.fields.mask_dt(k, n) || !sc.fields.mask_dw(k, n)) continue;
    dwdt.push_back(sc.fields.d_omega_hat_dt(k, n));
    dtdt.push_back(sc.fields.d_t_hat_dt(k, n));
    dwdw.push_back(sc.fields.d_omega_hat_dw(k, n));
    dtdw.push_back(sc.fields.d_t_hat_dw(k, n));
  }
  CHECK(rel_err(median(dwdt), c / (1.0 + bc2)) < 0.05);
  CHECK(rel_err(median(dtdt), 1.0 / (1.0 + bc2)) < 0.05);
  CHECK(rel_err(median(dwdw), bc2 / (1.0 + bc2)) < 0.05);
  CHECK(rel_err(median(dtdw), kBeta * kBeta * c / (1.0 + bc2)) < 0.05);
}

TEST_CASE("field partials: tone IF field is flat") {
  const Scene sc = tone_scene();
  const double noise_floor = sc.V.freq_step_rad_s() / (10.0 * sc.V.time_step_s());
  for (const auto& [k, n] : valid_interior(sc)) {
    if (!sc.fields.mask_dt(k, n)) continue;
    CHECK(std::abs(sc.fields.d_omega_hat_dt(k, n)) < noise_floor);
  }
}

TEST_CASE("chirp rate: linear chirp recovered within tolerance") {
  const double c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  std::vector<double> rates;
  for (const auto& [k, n] : valid_interior(sc))
    if (sc.fields.mask_chirp(k, n) && std::isfinite(sc.fields.chirp_rate(k, n)))
      rates.push_back(sc.fields.chirp_rate(k, n));
  REQUIRE(rates.size() > 1000);
  CHECK(rel_err(median(rates), c) < 0.05);
}

TEST_CASE("chirp rate: tone sits far below the boundary") {
  const Scene sc = tone_scene();
  const double boundary = std::pow(kBeta, -2.0 / 3.0);
  std::vector<double> rates;
  for (const auto& [k, n] : valid_interior(sc))
    if (sc.fields.mask_chirp(k, n)) rates.push_back(std::abs(sc.fields.chirp_rate(k, n)));
  CHECK(median(rates) < 0.05 * boundary);
}

TEST_CASE("chirp rate: impulse hits the Inf branch on the ridge") {
  const Scene sc = impulse_scene();
  const Eigen::Index ridge_col = 500;  // t0 = 0.25 s at fs = 2000
  int checked = 0;
  for (Eigen::Index k = 1; k < sc.V.n_freq() - 1; ++k) {
    if (!sc.fields.mask(k, ridge_col) || !sc.fields.mask_chirp(k, ridge_col)) continue;
    CHECK(std::isinf(sc.fields.chirp_rate(k, ridge_col)));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("second-order IF: exact on the linear chirp") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const double tol = sc.V.freq_step_rad_s() / 2.0;
  int used = 0;
  for (const auto& [k, n] : valid_interior(sc)) {
    if (sc.fields.fallback_if2(k, n)) continue;
    CHECK(std::abs(sc.fields.omega_hat2(k, n) - (b + c * sc.V.time_axis_s[n])) < tol);
    ++used;
  }
  CHECK(used > 1000);
}

TEST_CASE("second-order IF: tone falls back but stays on the tone frequency") {
  const Scene sc = tone_scene();
  const double omega0 = 2.0 * kPi * 300.0;
  const double tol = sc.V.freq_step_rad_s() / 2.0;
  for (const auto& [k, n] : valid_interior(sc))
    CHECK(std::abs(sc.fields.omega_hat2(k, n) - omega0) < tol);
}

TEST_CASE("second-order GD: exact on the linear chirp, recovers the start frequency") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const double tol = sc.V.time_step_s() / 2.0;
  int used = 0;
  for (const auto& [k, n] : valid_interior(sc)) {
    if (sc.fields.fallback_gd2(k, n)) continue;
    const double gd = (sc.V.freq_axis_rad_s[k] - b) / c;
    if (gd < sc.V.time_axis_s[sc.V.interior_begin()] ||
        gd > sc.V.time_axis_s[sc.V.interior_end() - 1])
      continue;  // ridge time outside the record cannot be located on the grid
    // Half a grid step where the keep decision happens (near the ridge); a
    // few steps at extreme detunes, where the (omega - omega_hat) lever arm
    // multiplies the quadrature noise of the differenced slope.
    const double detune = std::abs(sc.V.freq_axis_rad_s[k] - b - c * sc.V.time_axis_s[n]);
    CHECK(std::abs(sc.fields.t_hat2(k, n) - gd) <
          (detune < 100.0 ? tol : 2.5 * sc.V.time_step_s()));

    // start-frequency recovery from the estimator pair
    if (sc.fields.mask_dw(k, n) && std::abs(sc.fields.d_t_hat_dw(k, n)) > 0.0) {
      const double slope = sc.fields.d_omega_hat_dw(k, n) / sc.fields.d_t_hat_dw(k, n);
      const double b_rec = sc.V.freq_axis_rad_s[k] - sc.fields.t_hat2(k, n) * slope;
      CHECK(rel_err(b_rec, b) < 0.02);
    }
    ++used;
  }
  CHECK(used > 1000);
}

TEST_CASE("second-order GD: impulse time stays exact") {
  const Scene sc = impulse_scene();
  const double tol = sc.V.time_step_s() / 2.0;
  for (const auto& [k, n] : valid_interior(sc))
    CHECK(std::abs(sc.fields.t_hat2(k, n) - 0.25) < tol);
}

TEST_CASE("harmonic-branch rectification: chirp ridge magnitude equals the amplitude") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 200.0;
  const Scene sc = lfm_scene();
  const TFGrid vs = rectify_for_set(sc.V, sc.fields);
  int checked = 0;
  for (Eigen::Index n = sc.V.interior_begin(); n < sc.V.interior_end(); n += 3) {
    const double ridge = b + c * sc.V.time_axis_s[n];
    const auto k = static_cast<Eigen::Index>(std::llround(ridge / sc.V.freq_step_rad_s()));
    if (k < 1 || k >= sc.V.n_freq() - 1) continue;
    if (!sc.fields.mask(k, n) || !std::isfinite(sc.fields.chirp_rate(k, n))) continue;
    CHECK(rel_err(std::abs(vs.values(k, n)), 1.0) < 0.05);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("transient-branch rectification: ridge reproduces the chirp spectrum") {
  const double b = 2.0 * kPi * 150.0, c = 2.0 * kPi * 400.0;
  const double a = 0.4;
  const Scene sc = lfm_scene(150.0, 400.0);
  const TFGrid vt = rectify_for_tet(sc.V, sc.fields);
  const double spectrum_mag = std::sqrt(2.0 * kPi / c);
  int checked = 0;
  for (Eigen::Index k = 1; k < sc.V.n_freq() - 1; ++k) {
    const double omega = sc.V.freq_axis_rad_s[k];
    const double ridge_t = (omega - b) / c;
    const auto n = static_cast<Eigen::Index>(std::llround(ridge_t * kFs));
    if (n < sc.V.interior_begin() || n >= sc.V.interior_end()) continue;
    if (!sc.fields.mask(k, n) || !sc.fields.mask_chirp(k, n)) continue;

    CHECK(rel_err(std::abs(vt.values(k, n)), spectrum_mag) < 0.05);

    // The stationary-phase spectrum of the chirp pins down the rectifier's
    // phase convention; positive chirp rates carry the +pi/4 phase.
    const double detune = omega - b;
    const std::complex<double> want =
        spectrum_mag * std::polar(1.0, a + kPi / 4.0 - detune * detune / (2.0 * c));
    CHECK(rel_err(vt.values(k, n), want) < 0.05);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("transient-branch rectification: negative chirp rates carry the -pi/4 phase") {
  const double b = 2.0 * kPi * 450.0, c = -2.0 * kPi * 400.0;
  const double a = 0.0;
  const Scene sc = make_scene(synth_lfm(1.0, a, b, c, kDur, kFs), kBeta);
  const TFGrid vt = rectify_for_tet(sc.V, sc.fields);
  const double spectrum_mag = std::sqrt(2.0 * kPi / std::abs(c));
  int checked = 0;
  for (Eigen::Index k = 1; k < sc.V.n_freq() - 1; ++k) {
    const double omega = sc.V.freq_axis_rad_s[k];
    const auto n = static_cast<Eigen::Index>(std::llround((omega - b) / c * kFs));
    if (n < sc.V.interior_begin() || n >= sc.V.interior_end()) continue;
    if (!sc.fields.mask(k, n) || !sc.fields.mask_chirp(k, n)) continue;
    const double detune = omega - b;
    const std::complex<double> want =
        spectrum_mag * std::polar(1.0, a - kPi / 4.0 - detune * detune / (2.0 * c));
    CHECK(rel_err(vt.values(k, n), want) < 0.05);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("transient-branch rectification: impulse ridge reproduces the flat spectrum") {
  const Scene sc = impulse_scene();
  const TFGrid vt = rectify_for_tet(sc.V, sc.fields);
  const Eigen::Index ridge_col = 500;
  int checked = 0;
  for (Eigen::Index k = 5; k < sc.V.n_freq() - 5; ++k) {
    if (!sc.fields.mask(k, ridge_col) || !sc.fields.mask_chirp(k, ridge_col)) continue;
    // spectrum of the unit-area impulse at t0: exp(-i omega t0)
    const std::complex<double> want = std::polar(1.0, -sc.V.freq_axis_rad_s[k] * 0.25);
    CHECK(rel_err(vt.values(k, ridge_col), want) < 1e-6);
    ++checked;
  }
  CHECK(checked > 400);
}

TEST_CASE("rectified magnitudes vary smoothly along a slowly ramping chirp rate") {
  // cubic-phase component: f(t) = 150 + 100 t + 50 t^2 Hz, so the chirp rate
  // ramps from 2pi*100 to 2pi*200 rad/s^2 across the record
  Signal s;
  s.sample_rate_hz = kFs;
  s.samples.resize(static_cast<Eigen::Index>(kDur * kFs));
  for (Eigen::Index i = 0; i < s.samples.size(); ++i) {
    const double t = static_cast<double>(i) / kFs;
    const double cycles = 150.0 * t + 50.0 * t * t + (50.0 / 3.0) * t * t * t;
    s.samples[i] = std::polar(1.0, 2.0 * kPi * cycles);
  }
  const Scene sc = make_scene(s, kBeta);
  const TFGrid vs = rectify_for_set(sc.V, sc.fields);

  double prev = -1.0;
  for (Eigen::Index n = sc.V.interior_begin(); n < sc.V.interior_end(); ++n) {
    Eigen::Index k_star = 0;
    sc.V.values.col(n).cwiseAbs().maxCoeff(&k_star);
    const double mag = std::abs(vs.values(k_star, n));
    if (prev > 0.0 && mag > 0.0) CHECK(std::abs(mag - prev) / prev < 0.10);
    prev = mag;
  }
}

TEST_CASE("estimator error laws: first-order errors follow the chirp-rate trade-off") {
  const double b = 2.0 * kPi * 150.0;
  const double boundary = std::pow(kBeta, -2.0 / 3.0);
  std::vector<double> set_err_ratio, tet_err_ratio;
  for (double factor : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double c = factor * boundary;
    const Scene sc = lfm_scene(150.0, c / (2.0 * kPi));
    const double bc2 = kBeta * kBeta * c * c;
    std::vector<double> e_w_pred, e_w_meas, e_t_pred, e_t_meas;
    for (const auto& [k, n] : valid_interior(sc)) {
      const double t = sc.V.time_axis_s[n];
      const double omega = sc.V.freq_axis_rad_s[k];
      const double detune = omega - b - c * t;
      if (std::abs(detune) < 2.0 * sc.V.freq_step_rad_s()) continue;  // measurable error only
      e_w_meas.push_back(std::abs(sc.fields.omega_hat(k, n) - (b + c * t)));
      e_w_pred.push_back(std::abs(detune) * bc2 / (1.0 + bc2));
      e_t_meas.push_back(std::abs(sc.fields.t_hat(k, n) - (omega - b) / c));
      e_t_pred.push_back(std::abs(t - (omega - b) / c) / (1.0 + bc2));
    }
    REQUIRE(e_w_meas.size() > 500);
    std::vector<double> rw, rt;
    for (size_t i = 0; i < e_w_meas.size(); ++i) {
      rw.push_back(e_w_meas[i] / e_w_pred[i]);
      rt.push_back(e_t_meas[i] / e_t_pred[i]);
    }
    CHECK(std::abs(median(rw) - 1.0) < 0.05);
    CHECK(std::abs(median(rt) - 1.0) < 0.05);

    // normalized per-pixel errors for the monotonicity sweep
    std::vector<double> rw_n, rt_n;
    for (const auto& [k, n] : valid_interior(sc)) {
      const double t = sc.V.time_axis_s[n];
      const double omega = sc.V.freq_axis_rad_s[k];
      const double dt_ridge = std::abs(t - (omega - b) / c);
      if (dt_ridge * std::abs(c) < 2.0 * sc.V.freq_step_rad_s()) continue;
      rw_n.push_back(std::abs(sc.fields.omega_hat(k, n) - (b + c * t)) / dt_ridge);
      rt_n.push_back(std::abs(sc.fields.t_hat(k, n) - (omega - b) / c) / dt_ridge);
    }
    set_err_ratio.push_back(median(rw_n));
    tet_err_ratio.push_back(median(rt_n));
  }
  // increasing |c|: harmonic-branch error grows, transient-branch error shrinks
  for (size_t i = 1; i < set_err_ratio.size(); ++i) {
    CHECK(set_err_ratio[i] > set_err_ratio[i - 1]);
    CHECK(tet_err_ratio[i] < tet_err_ratio[i - 1]);
  }
}

TEST_CASE("zero signal: all-masked fields, no NaN anywhere") {
  Signal zero;
  zero.sample_rate_hz = 1000.0;
  zero.samples = Eigen::VectorXcd::Zero(600);
  const Scene sc = make_scene(zero, kBeta);
  CHECK_FALSE(sc.fields.mask.any());
  for (const Eigen::MatrixXd* m :
       {&sc.fields.omega_hat, &sc.fields.t_hat, &sc.fields.d_omega_hat_dt,
        &sc.fields.d_t_hat_dt, &sc.fields.omega_hat2, &sc.fields.t_hat2})
    CHECK(!m->hasNaN());
}

TEST_CASE("validity mask: below-threshold pixels are masked") {
  const Scene sc = tone_scene();
  const double vmax = sc.V.values.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < sc.V.n_freq(); k += 3)
    for (Eigen::Index n = 0; n < sc.V.n_time(); n += 7)
      CHECK(sc.fields.mask(k, n) == (std::abs(sc.V.values(k, n)) > 1e-3 * vmax));
}

TEST_CASE("estimators reject mismatched grid kinds") {
  const Scene sc = tone_scene();
  CHECK_THROWS_AS(if_estimate(sc.V, sc.dVw, sc.fields.mask), ConfigError);
  CHECK_THROWS_AS(gd_estimate(sc.V, sc.dVt, sc.fields.mask), ConfigError);
}
