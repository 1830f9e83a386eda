#pragma once

#include <optional>
#include <string>

#include "stet/transforms.hpp"

namespace stet {

enum class Method { Stft, Set, Tet, Stet, Stet2 };

Method method_from_name(const std::string& name);  // "stft" | "set" | "tet" | "stet" | "stet2"
const char* method_name(Method m);

// Fully resolved analysis parameters. Build with make_analysis_config so the
// defaults (window span, n_fft, boundary) are derived in one place.
struct AnalysisConfig {
  GaussianWindowSpec window;
  int n_fft = 0;
  ExtractionConfig extraction;
};

// beta_s2 <= 0 picks a window spanning ~5% of the record; n_fft == 0 picks
// the next power of two >= 4x the window length; boundary_override <= 0
// keeps beta^(-2/3).
AnalysisConfig make_analysis_config(double fs_hz, Eigen::Index n_samples, double beta_s2 = 0.0,
                                    int n_fft = 0, double gamma = kDefaultGamma,
                                    double boundary_override = 0.0);

// One full estimator pass over a signal; every extraction method reuses it.
struct Analysis {
  TFGrid V;
  TFGrid dVt;
  TFGrid dVw;
  EstimatorFields fields;
  AnalysisConfig config;
};

Analysis analyze(const Signal& s, const AnalysisConfig& cfg);

// Extraction grid for one method (Method::Stft returns the plain STFT).
TFGrid extract(const Analysis& a, Method m);

// Routed transforms with their branch maps.
StetResult extract_stet(const Analysis& a, bool improved);

}  // namespace stet
