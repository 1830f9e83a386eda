#pragma once

#include <Eigen/Dense>
#include <complex>

namespace stet::detail {

// RAII wrapper around a 1-D complex FFTW plan of fixed size. The plan owns
// aligned buffers; execute() copies through them so callers can pass plain
// arrays.
class FftPlan {
 public:
  enum class Direction { Forward, Inverse };

  FftPlan(int n, Direction dir);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int size() const { return n_; }

  // Unnormalized transform; forward uses the exp(-i 2 pi k n / N) kernel.
  // out may alias in.
  void execute(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int n_ = 0;
  void* plan_ = nullptr;
  void* in_ = nullptr;
  void* out_ = nullptr;
};

Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);  // normalized by 1/N

}  // namespace stet::detail
