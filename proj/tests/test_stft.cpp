#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "stet/errors.hpp"
#include "stet/stft.hpp"
#include "test_helpers.hpp"

using namespace stet;
using namespace stet::testing;
constexpr double kPi = std::numbers::pi;

namespace {

struct ToneScene {
  double fs = 1000.0;
  double omega0 = 2.0 * kPi * 150.0;
  double amplitude = 1.0;
  GaussianWindowSpec window = make_gaussian_window(1e-4, 1000.0);
  int n_fft = 1024;
  Signal signal = synth_harmonic(1.0, 2.0 * kPi * 150.0, 1.0, 1000.0);
};

}  // namespace

TEST_CASE("stft of a tone matches the closed form") {
  const ToneScene sc;
  const TFGrid v = stft(sc.signal, sc.window, sc.n_fft);
  const auto pixels = interior_pixels(v, 1e-3);
  REQUIRE(pixels.size() > 100);
  for (const auto& [k, n] : pixels) {
    const std::complex<double> want = harmonic_stft_oracle(
        sc.amplitude, sc.omega0, sc.window, v.time_axis_s[n], v.freq_axis_rad_s[k]);
    CHECK(rel_err(v.values(k, n), want) < 1e-3);
  }
}

TEST_CASE("stft of an impulse matches the closed form") {
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s = synth_impulse(2.0, 0.5, 1.0, fs);
  const TFGrid v = stft(s, w, 1024);
  const auto pixels = interior_pixels(v, 1e-3);
  REQUIRE(pixels.size() > 100);
  for (const auto& [k, n] : pixels) {
    const std::complex<double> want =
        impulse_stft_oracle(2.0, 0.5, w, v.time_axis_s[n], v.freq_axis_rad_s[k]);
    CHECK(rel_err(v.values(k, n), want) < 1e-3);
  }
}

TEST_CASE("stft of the zero signal is the zero grid") {
  Signal zero;
  zero.sample_rate_hz = 1000.0;
  zero.samples = Eigen::VectorXcd::Zero(500);
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  const TFGrid v = stft(zero, w, 512);
  CHECK(v.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stft rejects short signals and short transforms") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  Signal tiny;
  tiny.sample_rate_hz = 1000.0;
  tiny.samples = Eigen::VectorXcd::Ones(w.length() - 2);
  CHECK_THROWS_AS(stft(tiny, w, 1024), ConfigError);

  const Signal s = synth_harmonic(1.0, 100.0, 1.0, 1000.0);
  CHECK_THROWS_AS(stft(s, w, w.length() - 1), ConfigError);
  CHECK_THROWS_AS(stft(s, w, 1023), ConfigError);  // odd
}

TEST_CASE("stft is linear") {
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s1 = synth_harmonic(1.0, 2.0 * kPi * 100.0, 0.4, fs);
  const Signal s2 = synth_lfm(0.5, 0.3, 2.0 * kPi * 200.0, 2.0 * kPi * 100.0, 0.4, fs);
  Signal combo = s1;
  combo.samples = 2.0 * s1.samples + s2.samples;

  const TFGrid va = stft(combo, w, 512);
  const TFGrid v1 = stft(s1, w, 512);
  const TFGrid v2 = stft(s2, w, 512);
  const double scale = va.values.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < va.n_freq(); k += 7)
    for (Eigen::Index n = 0; n < va.n_time(); n += 13)
      CHECK(std::abs(va.values(k, n) - (2.0 * v1.values(k, n) + v2.values(k, n))) <=
            1e-12 * scale);
}

TEST_CASE("stft covaries with time shifts") {
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s = synth_lfm(1.0, 0.0, 2.0 * kPi * 100.0, 2.0 * kPi * 150.0, 0.6, fs);
  const Eigen::Index shift = 40;
  Signal shifted = s;
  shifted.samples.setZero();
  shifted.samples.tail(s.samples.size() - shift) = s.samples.head(s.samples.size() - shift);

  const TFGrid v = stft(s, w, 512);
  const TFGrid vs = stft(shifted, w, 512);
  for (Eigen::Index k = 0; k < v.n_freq(); k += 5)
    for (Eigen::Index n = v.interior_begin() + shift; n < v.interior_end(); n += 11)
      CHECK(vs.values(k, n) == v.values(k, n - shift));
}

TEST_CASE("stft output stays finite") {
  const Signal s = synth_impulse(1e6, 0.1, 0.3, 2000.0);
  const GaussianWindowSpec w = make_gaussian_window(2e-5, 2000.0);
  const TFGrid v = stft(s, w, 256);
  CHECK(v.values.allFinite());
}

TEST_CASE("stft derivatives match centered finite differences") {
  // Low-band content keeps the finite-difference truncation error below the
  // comparison tolerance in both grid directions: the t-direction error goes
  // as (omega dt)^2/6 and the omega-direction error as (dw sqrt(beta))^2/2,
  // both relative to the derivative field's peak.
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(4e-5, fs);
  const int n_fft = 1024;
  const Signal tone = synth_harmonic(1.0, 2.0 * kPi * 8.0, 1.0, fs);
  const Signal chirp = synth_lfm(1.0, 0.1, 2.0 * kPi * 8.0, 2.0 * kPi * 3.0, 1.0, fs);

  for (const Signal& s : {tone, chirp}) {
    const StftTriple t = stft_with_derivatives(s, w, n_fft);
    const double dt = t.V.time_step_s();
    const double dw = t.V.freq_step_rad_s();
    const double vmax = t.V.values.cwiseAbs().maxCoeff();
    const double dt_max = t.dVt.values.cwiseAbs().maxCoeff();
    const double dw_max = t.dVw.values.cwiseAbs().maxCoeff();

    for (Eigen::Index k = 1; k < t.V.n_freq() - 1; ++k)
      for (Eigen::Index n = t.V.interior_begin(); n < t.V.interior_end(); ++n) {
        if (std::abs(t.V.values(k, n)) <= 1e-3 * vmax) continue;
        if ((k + 3 * n) % 17) continue;  // sparse sampling keeps the test quick

        const std::complex<double> fd_t =
            (t.V.values(k, n + 1) - t.V.values(k, n - 1)) / (2.0 * dt);
        const std::complex<double> an_t = t.dVt.values(k, n);
        CHECK(std::abs(fd_t - an_t) <= 1e-3 * dt_max);

        const std::complex<double> fd_w =
            (t.V.values(k + 1, n) - t.V.values(k - 1, n)) / (2.0 * dw);
        const std::complex<double> an_w = t.dVw.values(k, n);
        CHECK(std::abs(fd_w - an_w) <= 1e-3 * dw_max);
      }
  }
}

TEST_CASE("stft_dt and stft_dw equal the combined pass") {
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s = synth_lfm(1.0, 0.0, 2.0 * kPi * 90.0, 2.0 * kPi * 120.0, 0.5, fs);
  const StftTriple t = stft_with_derivatives(s, w, 512);
  const TFGrid dt = stft_dt(s, w, 512);
  const TFGrid dw = stft_dw(s, w, 512);
  CHECK((t.dVt.values - dt.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t.dVw.values - dw.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dt.kind == GridKind::StftDt);
  CHECK(dw.kind == GridKind::StftDw);
}

TEST_CASE("tone: time derivative ratio recovers the tone frequency") {
  const ToneScene sc;
  const StftTriple t = stft_with_derivatives(sc.signal, sc.window, sc.n_fft);
  const auto pixels = interior_pixels(t.V, 1e-3);
  for (const auto& [k, n] : pixels) {
    const std::complex<double> ratio = t.dVt.values(k, n) / (std::complex<double>{0.0, 1.0} * t.V.values(k, n));
    CHECK(std::abs(ratio.real() - sc.omega0) < 1e-6 * sc.omega0);
  }
}

TEST_CASE("chirp oracle: zero chirp reduces to the tone closed form") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  for (double omega = 100.0; omega < 2000.0; omega += 317.0) {
    const std::complex<double> got = lfm_stft_oracle(2.0, 0.0, 800.0, 0.0, w.beta_s2, 0.37, omega);
    const std::complex<double> want = harmonic_stft_oracle(2.0, 800.0, w, 0.37, omega);
    CHECK(rel_err(got, want) < 1e-12);
  }
}

TEST_CASE("chirp oracle: envelope peaks on the frequency law") {
  const double beta = 1e-4;
  const double b = 2.0 * kPi * 100.0;
  const double c = 2.0 * kPi * 200.0;
  for (double t = 0.1; t < 0.5; t += 0.1) {
    const double ridge = b + c * t;
    double best_omega = 0.0, best_mag = 0.0;
    for (double omega = ridge - 300.0; omega <= ridge + 300.0; omega += 1.0) {
      const double mag = std::abs(lfm_stft_oracle(1.0, 0.0, b, c, beta, t, omega));
      if (mag > best_mag) {
        best_mag = mag;
        best_omega = omega;
      }
    }
    CHECK(std::abs(best_omega - ridge) <= 1.0);
  }
}

TEST_CASE("chirp oracle: agrees with the discrete transform") {
  const double fs = 2000.0;
  const double b = 2.0 * kPi * 150.0;
  const double c = 2.0 * kPi * 400.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s = synth_lfm(1.0, 0.2, b, c, 1.0, fs);
  const TFGrid v = stft(s, w, 1024);
  const auto pixels = interior_pixels(v, 1e-2);
  REQUIRE(pixels.size() > 100);
  for (const auto& [k, n] : pixels) {
    const std::complex<double> want =
        lfm_stft_oracle(1.0, 0.2, b, c, w.beta_s2, v.time_axis_s[n], v.freq_axis_rad_s[k]);
    CHECK(rel_err(v.values(k, n), want) < 1e-2);
  }
}

TEST_CASE("direct quadrature point oracle agrees with the FFT path") {
  const double fs = 1000.0;
  const GaussianWindowSpec w = make_gaussian_window(1e-4, fs);
  const Signal s = synth_lfm(1.0, 0.0, 2.0 * kPi * 120.0, 2.0 * kPi * 80.0, 0.5, fs);
  const TFGrid v = stft(s, w, 512);
  for (Eigen::Index k : {10L, 77L, 200L})
    for (Eigen::Index n : {100L, 250L, 400L}) {
      const std::complex<double> want = direct_stft_point(s, w, n, v.freq_axis_rad_s[k]);
      CHECK(std::abs(v.values(k, n) - want) < 1e-12);
    }
}
