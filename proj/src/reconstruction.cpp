#include "stet/reconstruction.hpp"

#include <complex>

#include "fft.hpp"
#include "stet/errors.hpp"

namespace stet {

namespace {

void check_extracted(const StetResult& extracted) {
  if (extracted.grid.kind != GridKind::Stet2)
    throw ConfigError("reconstruction requires an improved-STET grid");
  if (extracted.branch.rows() != extracted.grid.values.rows() ||
      extracted.branch.cols() != extracted.grid.values.cols())
    throw ConfigError("branch map does not match the grid");
}

Signal empty_like(const TFGrid& grid) {
  Signal s;
  s.sample_rate_hz = grid.fs_hz();
  s.start_time_s = grid.time_axis_s.size() > 0 ? grid.time_axis_s[0] : 0.0;
  s.samples = Eigen::VectorXcd::Zero(grid.n_time());
  return s;
}

}  // namespace

Signal reconstruct_harmonic(const StetResult& extracted) {
  check_extracted(extracted);
  const TFGrid& g = extracted.grid;
  Signal s1 = empty_like(g);
  // Each kept harmonic-branch coefficient is already the component's time
  // signal at its frame, so the frequency sum collects one term per ridge.
  for (Eigen::Index n = 0; n < g.n_time(); ++n) {
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index k = 0; k < g.n_freq(); ++k)
      if (extracted.branch(k, n) == static_cast<signed char>(Branch::Set)) acc += g.values(k, n);
    s1.samples[n] = acc;
  }
  return s1;
}

Signal reconstruct_impulsive(const StetResult& extracted) {
  check_extracted(extracted);
  const TFGrid& g = extracted.grid;
  Signal s2 = empty_like(g);
  const Eigen::Index n_freq = g.n_freq();
  const int n_fft = g.n_fft;

  // Collapse kept transient-branch coefficients along time into one spectrum
  // sample per row.
  Eigen::VectorXcd spectrum = Eigen::VectorXcd::Zero(n_fft);
  bool any = false;
  for (Eigen::Index k = 0; k < n_freq; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < g.n_time(); ++n)
      if (extracted.branch(k, n) == static_cast<signed char>(Branch::Tet)) {
        const std::complex<double> v = g.values(k, n);
        acc += v;
        any = any || v != std::complex<double>{0.0, 0.0};
      }
    // Records that do not start at t=0 shift the inverse-transform kernel.
    spectrum[k] = acc * std::polar(1.0, g.freq_axis_rad_s[k] * s2.start_time_s);
  }
  if (!any) return s2;

  // s2[n] = (1/2pi) sum_k spectrum[k] exp(i omega_k t_n) dw, with
  // dw/(2 pi) = fs/n_fft; the inverse FFT supplies 1/n_fft.
  Eigen::VectorXcd time = detail::ifft(spectrum);
  const double scale = g.fs_hz();
  for (Eigen::Index n = 0; n < g.n_time(); ++n) s2.samples[n] = scale * time[n % n_fft];
  return s2;
}

ReconstructionResult reconstruct(const StetResult& extracted) {
  ReconstructionResult r;
  r.s1 = reconstruct_harmonic(extracted);
  r.s2 = reconstruct_impulsive(extracted);
  r.total = r.s1;
  r.total.samples += r.s2.samples;
  const Eigen::Index n = extracted.grid.n_time();
  const Eigen::Index margin = extracted.grid.edge_margin();
  r.interior_mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false);
  for (Eigen::Index i = margin; i < n - margin; ++i) r.interior_mask[i] = true;
  return r;
}

}  // namespace stet
