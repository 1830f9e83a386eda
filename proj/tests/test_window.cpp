#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "stet/errors.hpp"
#include "stet/window.hpp"

using namespace stet;
constexpr double kPi = std::numbers::pi;

TEST_CASE("window samples: center values and exact parity") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  const Eigen::VectorXd g = sample_window(w);
  const Eigen::VectorXd dg = sample_dwindow(w);
  const Eigen::VectorXd tg = sample_twindow(w);
  REQUIRE(g.size() == w.length());
  REQUIRE(w.length() % 2 == 1);

  CHECK(g[w.half_len] == 1.0);
  CHECK(dg[w.half_len] == 0.0);
  CHECK(tg[w.half_len] == 0.0);

  for (int m = 0; m < w.length(); ++m) {
    const int mirror = w.length() - 1 - m;
    CHECK(g[m] == g[mirror]);
    CHECK(dg[m] == -dg[mirror]);
    CHECK(tg[m] == -tg[mirror]);
  }
}

TEST_CASE("window samples: direct evaluation") {
  // beta = 1e-4 s^2, fs = 1000: g at t = 0.02 s is exp(-2)
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  const Eigen::VectorXd g = sample_window(w);
  const int idx = w.half_len + 20;  // 20 samples = 0.02 s
  CHECK(g[idx] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("window truncation: tail bound enforced, overridable") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  const Eigen::VectorXd g = sample_window(w);
  CHECK(g[0] <= kWindowTailBound);
  CHECK(g[w.length() - 1] <= kWindowTailBound);

  CHECK_THROWS_AS(make_gaussian_window(1e-4, 1000.0, 10), ConfigError);
  const GaussianWindowSpec wide = make_gaussian_window(1e-4, 1000.0, 10, true);
  CHECK(wide.half_len == 10);
}

TEST_CASE("frequency response: closed-form values") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  CHECK(frequency_response(w, 0.0) == doctest::Approx(std::sqrt(2e-4 * kPi)).epsilon(1e-12));
  CHECK(frequency_response(w, 100.0) ==
        doctest::Approx(std::sqrt(2.0 * kPi * 1e-4) * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("frequency response: matches the transformed sampled window") {
  const GaussianWindowSpec w = make_gaussian_window(1e-4, 1000.0);
  const Eigen::VectorXd g = sample_window(w);
  const double dt = 1.0 / w.fs_hz;
  // quadrature oracle over the main lobe
  for (double omega = 0.0; omega <= 1.5 / w.sigma_s(); omega += 13.7) {
    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m < w.length(); ++m)
      acc += g[m] * std::polar(1.0, -omega * w.time_at(m)) * dt;
    const double want = frequency_response(w, omega);
    CHECK(std::abs(acc.real() - want) / want < 1e-4);
    CHECK(std::abs(acc.imag()) < 1e-12);
  }
}

TEST_CASE("frequency response: strictly decreasing in |omega|") {
  const GaussianWindowSpec w = make_gaussian_window(4e-4, 2000.0);
  double prev = frequency_response(w, 0.0);
  for (double omega = 5.0; omega < 500.0; omega += 5.0) {
    const double cur = frequency_response(w, omega);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("odd windows integrate to zero") {
  const GaussianWindowSpec w = make_gaussian_window(2.5e-4, 1500.0);
  const double dt = 1.0 / w.fs_hz;
  CHECK(std::abs(sample_dwindow(w).sum() * dt) < 1e-10);
  CHECK(std::abs(sample_twindow(w).sum() * dt) < 1e-10);
}

TEST_CASE("window spec: rejects bad parameters") {
  CHECK_THROWS_AS(make_gaussian_window(0.0, 1000.0), ConfigError);
  CHECK_THROWS_AS(make_gaussian_window(-1e-4, 1000.0), ConfigError);
  CHECK_THROWS_AS(make_gaussian_window(1e-4, 0.0), ConfigError);
  CHECK_THROWS_AS(make_gaussian_window(1e-4, 1000.0, 0), ConfigError);
}
