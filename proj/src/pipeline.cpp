#include "stet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stet/errors.hpp"

namespace stet {

Method method_from_name(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "stft") return Method::Stft;
  if (lower == "set") return Method::Set;
  if (lower == "tet") return Method::Tet;
  if (lower == "stet") return Method::Stet;
  if (lower == "stet2") return Method::Stet2;
  throw ConfigError("unknown method '" + name + "' (expected stft|set|tet|stet|stet2)");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Stft: return "stft";
    case Method::Set: return "set";
    case Method::Tet: return "tet";
    case Method::Stet: return "stet";
    case Method::Stet2: return "stet2";
  }
  return "unknown";
}

AnalysisConfig make_analysis_config(double fs_hz, Eigen::Index n_samples, double beta_s2,
                                    int n_fft, double gamma, double boundary_override) {
  if (n_samples < 2) throw ConfigError("record must contain at least two samples");
  if (beta_s2 <= 0.0) {
    // Window spanning roughly 5% of the record: half span ~2.5% of the
    // duration at the default truncation radius of ~6.07 sigma.
    const double half_span_s = 0.025 * static_cast<double>(n_samples) / fs_hz;
    const double sigma = half_span_s / 6.0697;
    beta_s2 = sigma * sigma;
  }
  AnalysisConfig cfg;
  cfg.window = make_gaussian_window(beta_s2, fs_hz);
  if (cfg.window.length() > n_samples)
    throw ConfigError("record is shorter than the analysis window");
  if (n_fft == 0) {
    n_fft = 1;
    while (n_fft < 4 * cfg.window.length()) n_fft *= 2;
  }
  if (n_fft < cfg.window.length()) throw ConfigError("n_fft must cover the window length");
  if (n_fft % 2 != 0) throw ConfigError("n_fft must be even");
  cfg.n_fft = n_fft;

  cfg.extraction.boundary_rad_s2 =
      boundary_override > 0.0 ? boundary_override : std::pow(beta_s2, -2.0 / 3.0);
  cfg.extraction.freq_tolerance = std::numbers::pi * fs_hz / static_cast<double>(n_fft);
  cfg.extraction.time_tolerance = 0.5 / fs_hz;
  if (!(gamma > 0.0) || gamma >= 1.0) throw ConfigError("gamma must be in (0, 1)");
  cfg.extraction.gamma = gamma;
  return cfg;
}

Analysis analyze(const Signal& s, const AnalysisConfig& cfg) {
  Analysis a;
  a.config = cfg;
  StftTriple t = stft_with_derivatives(s, cfg.window, cfg.n_fft);
  a.V = std::move(t.V);
  a.dVt = std::move(t.dVt);
  a.dVw = std::move(t.dVw);
  a.fields = compute_estimator_fields(a.V, a.dVt, a.dVw, cfg.extraction.gamma);
  return a;
}

TFGrid extract(const Analysis& a, Method m) {
  switch (m) {
    case Method::Stft: return a.V;
    case Method::Set: return set_transform(a.V, a.fields, a.config.extraction);
    case Method::Tet: return tet_transform(a.V, a.fields, a.config.extraction);
    case Method::Stet: return stet_transform(a.V, a.fields, a.config.extraction).grid;
    case Method::Stet2: return improved_stet_transform(a.V, a.fields, a.config.extraction).grid;
  }
  throw ConfigError("unknown method");
}

StetResult extract_stet(const Analysis& a, bool improved) {
  return improved ? improved_stet_transform(a.V, a.fields, a.config.extraction)
                  : stet_transform(a.V, a.fields, a.config.extraction);
}

}  // namespace stet
