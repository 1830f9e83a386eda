#include "fft.hpp"

#include <fftw3.h>

#include <cstring>

#include "stet/errors.hpp"

namespace stet::detail {

FftPlan::FftPlan(int n, Direction dir) : n_(n) {
  if (n < 1) throw ConfigError("FFT size must be positive");
  auto* in = fftw_alloc_complex(static_cast<size_t>(n));
  auto* out = fftw_alloc_complex(static_cast<size_t>(n));
  if (!in || !out) {
    fftw_free(in);
    fftw_free(out);
    throw std::bad_alloc();
  }
  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  auto* plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
  if (!plan) {
    fftw_free(in);
    fftw_free(out);
    throw NumericError("failed to create FFT plan");
  }
  in_ = in;
  out_ = out;
  plan_ = plan;
}

FftPlan::~FftPlan() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

void FftPlan::execute(const std::complex<double>* in, std::complex<double>* out) const {
  std::memcpy(in_, in, static_cast<size_t>(n_) * sizeof(fftw_complex));
  fftw_execute_dft(static_cast<fftw_plan>(plan_), static_cast<fftw_complex*>(in_),
                   static_cast<fftw_complex*>(out_));
  std::memcpy(out, out_, static_cast<size_t>(n_) * sizeof(fftw_complex));
}

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
  FftPlan plan(static_cast<int>(x.size()), FftPlan::Direction::Forward);
  Eigen::VectorXcd y(x.size());
  plan.execute(x.data(), y.data());
  return y;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
  FftPlan plan(static_cast<int>(x.size()), FftPlan::Direction::Inverse);
  Eigen::VectorXcd y(x.size());
  plan.execute(x.data(), y.data());
  y /= static_cast<double>(x.size());
  return y;
}

}  // namespace stet::detail
