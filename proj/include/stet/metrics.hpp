#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stet/pipeline.hpp"

namespace stet {

// Order-alpha Renyi entropy (bits) of the normalized energy distribution
// p = |G|^2 / sum|G|^2. Lower means more concentrated. Throws on a zero grid.
double renyi_entropy(const TFGrid& grid, double alpha = 3.0);

struct EnergyCurvePoint {
  long coefficient_count;
  double energy_fraction;
};

// Cumulative energy fraction captured by the largest-magnitude coefficients,
// sampled at `points` counts up to the number of nonzero pixels.
std::vector<EnergyCurvePoint> normalized_energy_curve(const TFGrid& grid, int points);

// Smallest number of largest-magnitude coefficients whose cumulative energy
// reaches `fraction` of the total. Exact (no sampling).
long coefficient_count_for_energy(const TFGrid& grid, double fraction);

struct SweepPoint {
  double snr_db;
  double renyi_entropy_bits;
};

// Adds noise at each SNR (per-level seeds derived from `seed`), runs the
// method pipeline and measures the Renyi entropy. Deterministic per seed.
std::vector<SweepPoint> snr_sweep(const Signal& clean, const std::vector<double>& snrs_db,
                                  Method method, const AnalysisConfig& cfg, std::uint64_t seed,
                                  double alpha = 3.0);

enum class RidgeOrientation { TimeIndexed, FrequencyIndexed };

struct RidgePoint {
  double time_s;
  double omega_rad_s;
  double magnitude;
};

struct RidgeTrack {
  std::vector<RidgePoint> points;  // one per index of the orientation axis
  RidgeOrientation orientation = RidgeOrientation::TimeIndexed;
};

// Maximum-energy path by dynamic programming: maximizes
// sum log|G| - penalty * (index jump)^2 along the orientation axis. With zero
// penalty this reduces to the per-index argmax.
RidgeTrack extract_ridge(const TFGrid& grid, RidgeOrientation orientation,
                         double smoothness_penalty);

struct ConcentrationReport {
  double renyi_entropy_bits = 0.0;
  double renyi_alpha = 3.0;
  std::vector<EnergyCurvePoint> normalized_energy;
  RidgeTrack ridge;
  GridKind method_tag = GridKind::Stft;
};

ConcentrationReport concentration_report(const TFGrid& grid, int curve_points = 200,
                                         double alpha = 3.0, double ridge_penalty = 1.0);

}  // namespace stet
