#pragma once

#include "stet/estimators.hpp"

namespace stet {

// Per-pixel extraction parameters. The Dirac selections of the continuous
// definitions are discretized as half-grid-step tolerance bands; coefficients
// are kept in place, never relocated.
struct ExtractionConfig {
  double boundary_rad_s2 = 0.0;  // chirp-rate routing boundary, default beta^(-2/3)
  double freq_tolerance = 0.0;   // |omega_hat - omega| acceptance, default freq_step/2
  double time_tolerance = 0.0;   // |t_hat - t| acceptance, default time_step/2
  double gamma = kDefaultGamma;
  bool median_filter_branch = false;  // 3x3 median smoothing of the branch map
};

ExtractionConfig default_extraction_config(const TFGrid& V, double gamma = kDefaultGamma);

// Keeps coefficients whose IF estimate points back at their own bin.
TFGrid set_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg);

// Keeps coefficients whose GD estimate points back at their own frame.
TFGrid tet_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg);

enum class Branch : signed char { Masked = -1, Set = 0, Tet = 1 };

struct StetResult {
  TFGrid grid;
  // Per-pixel route: Set where |c| <= boundary, Tet where |c| > boundary
  // (Inf included), Masked where the chirp rate is undefined.
  Eigen::Array<signed char, Eigen::Dynamic, Eigen::Dynamic> branch;
  long fallback_pixel_count = 0;  // kept pixels decided by a first-order fallback
};

// Routes every pixel to the SET or TET keep-rule by comparing |c| against the
// boundary; the output grid is the sum of the two disjoint branch grids.
StetResult stet_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg);

// Same routing, but the branches use the second-order estimators over the
// rectified grids. Pixels whose second-order estimator fell back to first
// order are extracted with the first-order rule and tallied.
StetResult improved_stet_transform(const TFGrid& V, const EstimatorFields& f,
                                   const ExtractionConfig& cfg);

}  // namespace stet
