#include "stet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stet/errors.hpp"

namespace stet {

namespace {

// Descending squared magnitudes of the nonzero pixels.
std::vector<double> sorted_energies(const TFGrid& grid) {
  std::vector<double> e;
  e.reserve(static_cast<size_t>(grid.values.size()));
  for (Eigen::Index k = 0; k < grid.values.rows(); ++k)
    for (Eigen::Index n = 0; n < grid.values.cols(); ++n) {
      const double a = std::norm(grid.values(k, n));
      if (a > 0.0) e.push_back(a);
    }
  std::sort(e.begin(), e.end(), std::greater<>());
  return e;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double renyi_entropy(const TFGrid& grid, double alpha) {
  if (alpha == 1.0 || !(alpha > 0.0)) throw ConfigError("Renyi order must be positive and != 1");
  double total = 0.0;
  double moment = 0.0;
  for (Eigen::Index k = 0; k < grid.values.rows(); ++k)
    for (Eigen::Index n = 0; n < grid.values.cols(); ++n) {
      const double p = std::norm(grid.values(k, n));
      total += p;
      moment += std::pow(p, alpha);
    }
  if (total == 0.0) throw ConfigError("Renyi entropy is undefined for a zero grid");
  // sum (p/total)^alpha == moment / total^alpha
  const double log_sum = std::log2(moment) - alpha * std::log2(total);
  return log_sum / (1.0 - alpha);
}

std::vector<EnergyCurvePoint> normalized_energy_curve(const TFGrid& grid, int points) {
  if (points < 1) throw ConfigError("curve needs at least one point");
  const std::vector<double> e = sorted_energies(grid);
  if (e.empty()) throw ConfigError("normalized energy is undefined for a zero grid");
  std::vector<double> prefix(e.size());
  double acc = 0.0;
  for (size_t i = 0; i < e.size(); ++i) prefix[i] = (acc += e[i]);
  const double total = prefix.back();

  std::vector<EnergyCurvePoint> curve;
  curve.reserve(static_cast<size_t>(points));
  const auto nz = static_cast<long>(e.size());
  long prev = 0;
  for (int j = 1; j <= points; ++j) {
    long count = std::llround(static_cast<double>(j) * static_cast<double>(nz) /
                              static_cast<double>(points));
    count = std::clamp(count, 1L, nz);
    if (count == prev) continue;
    prev = count;
    curve.push_back({count, prefix[static_cast<size_t>(count - 1)] / total});
  }
  if (curve.empty() || curve.back().coefficient_count != nz) curve.push_back({nz, 1.0});
  return curve;
}

long coefficient_count_for_energy(const TFGrid& grid, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("fraction must be in (0, 1]");
  const std::vector<double> e = sorted_energies(grid);
  if (e.empty()) throw ConfigError("normalized energy is undefined for a zero grid");
  double total = 0.0;
  for (double v : e) total += v;
  const double target = fraction * total * (1.0 - 1e-12);
  double acc = 0.0;
  for (size_t i = 0; i < e.size(); ++i) {
    acc += e[i];
    if (acc >= target) return static_cast<long>(i) + 1;
  }
  return static_cast<long>(e.size());
}

std::vector<SweepPoint> snr_sweep(const Signal& clean, const std::vector<double>& snrs_db,
                                  Method method, const AnalysisConfig& cfg, std::uint64_t seed,
                                  double alpha) {
  for (double snr : snrs_db)
    if (!(snr >= -20.0) || !(snr <= 60.0))
      throw ConfigError("sweep SNR values must lie in [-20, 60] dB");
  std::vector<SweepPoint> out;
  out.reserve(snrs_db.size());
  for (size_t i = 0; i < snrs_db.size(); ++i) {
    const std::uint64_t level_seed = splitmix64(seed + i);
    const Signal noisy = add_noise(clean, snrs_db[i], level_seed);
    const Analysis a = analyze(noisy, cfg);
    const TFGrid g = extract(a, method);
    out.push_back({snrs_db[i], renyi_entropy(g, alpha)});
  }
  return out;
}

RidgeTrack extract_ridge(const TFGrid& grid, RidgeOrientation orientation,
                         double smoothness_penalty) {
  if (!(smoothness_penalty >= 0.0)) throw ConfigError("smoothness penalty must be non-negative");
  const bool time_indexed = orientation == RidgeOrientation::TimeIndexed;
  // `steps` walks the orientation axis, `states` the other one.
  const Eigen::Index steps = time_indexed ? grid.n_time() : grid.n_freq();
  const Eigen::Index states = time_indexed ? grid.n_freq() : grid.n_time();
  if (steps == 0 || states == 0) throw ConfigError("ridge extraction needs a non-empty grid");

  auto magnitude = [&](Eigen::Index state, Eigen::Index step) {
    return time_indexed ? std::abs(grid.values(state, step)) : std::abs(grid.values(step, state));
  };
  auto score = [&](Eigen::Index state, Eigen::Index step) {
    return std::log(std::max(magnitude(state, step), 1e-300));
  };

  Eigen::MatrixXd best(states, steps);
  Eigen::MatrixXi back(states, steps);
  for (Eigen::Index s = 0; s < states; ++s) {
    best(s, 0) = score(s, 0);
    back(s, 0) = 0;
  }
  for (Eigen::Index j = 1; j < steps; ++j) {
    if (smoothness_penalty == 0.0) {
      // No jump cost: every state chains to the previous column's maximum.
      Eigen::Index arg = 0;
      best.col(j - 1).maxCoeff(&arg);
      for (Eigen::Index s = 0; s < states; ++s) {
        best(s, j) = score(s, j) + best(arg, j - 1);
        back(s, j) = static_cast<int>(arg);
      }
      continue;
    }
    for (Eigen::Index s = 0; s < states; ++s) {
      double top = -std::numeric_limits<double>::infinity();
      Eigen::Index arg = 0;
      for (Eigen::Index p = 0; p < states; ++p) {
        const double jump = static_cast<double>(s - p);
        const double cand = best(p, j - 1) - smoothness_penalty * jump * jump;
        if (cand > top) {
          top = cand;
          arg = p;
        }
      }
      best(s, j) = score(s, j) + top;
      back(s, j) = static_cast<int>(arg);
    }
  }

  std::vector<Eigen::Index> path(static_cast<size_t>(steps));
  Eigen::Index tail = 0;
  best.col(steps - 1).maxCoeff(&tail);
  path[static_cast<size_t>(steps - 1)] = tail;
  for (Eigen::Index j = steps - 1; j > 0; --j)
    path[static_cast<size_t>(j - 1)] = back(path[static_cast<size_t>(j)], j);

  RidgeTrack track;
  track.orientation = orientation;
  track.points.reserve(static_cast<size_t>(steps));
  for (Eigen::Index j = 0; j < steps; ++j) {
    const Eigen::Index s = path[static_cast<size_t>(j)];
    RidgePoint p;
    p.time_s = time_indexed ? grid.time_axis_s[j] : grid.time_axis_s[s];
    p.omega_rad_s = time_indexed ? grid.freq_axis_rad_s[s] : grid.freq_axis_rad_s[j];
    p.magnitude = magnitude(s, j);
    track.points.push_back(p);
  }
  return track;
}

ConcentrationReport concentration_report(const TFGrid& grid, int curve_points, double alpha,
                                         double ridge_penalty) {
  ConcentrationReport r;
  r.renyi_alpha = alpha;
  r.renyi_entropy_bits = renyi_entropy(grid, alpha);
  r.normalized_energy = normalized_energy_curve(grid, curve_points);
  r.ridge = extract_ridge(grid, RidgeOrientation::TimeIndexed, ridge_penalty);
  r.method_tag = grid.kind;
  return r;
}

}  // namespace stet
