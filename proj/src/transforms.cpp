#include "stet/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "stet/errors.hpp"

namespace stet {

namespace {

void check_config(const TFGrid& V, const ExtractionConfig& cfg) {
  if (!(cfg.boundary_rad_s2 > 0.0)) throw ConfigError("routing boundary must be positive");
  if (!(cfg.freq_tolerance > 0.0) || cfg.freq_tolerance > V.freq_step_rad_s() * (1.0 + 1e-12))
    throw ConfigError("frequency tolerance must be in (0, one grid step]");
  if (!(cfg.time_tolerance > 0.0) || cfg.time_tolerance > V.time_step_s() * (1.0 + 1e-12))
    throw ConfigError("time tolerance must be in (0, one grid step]");
}

void check_fields(const TFGrid& V, const EstimatorFields& f) {
  if (f.omega_hat.rows() != V.values.rows() || f.omega_hat.cols() != V.values.cols())
    throw ConfigError("estimator fields do not match the grid");
}

bool set_rule(const EstimatorFields& f, const ExtractionConfig& cfg, Eigen::Index k,
              Eigen::Index n, double omega_k, bool second_order) {
  const double est = second_order ? f.omega_hat2(k, n) : f.omega_hat(k, n);
  return std::abs(est - omega_k) <= cfg.freq_tolerance;
}

bool tet_rule(const EstimatorFields& f, const ExtractionConfig& cfg, Eigen::Index k,
              Eigen::Index n, double t_n, bool second_order) {
  const double est = second_order ? f.t_hat2(k, n) : f.t_hat(k, n);
  return std::abs(est - t_n) <= cfg.time_tolerance;
}

using BranchMap = Eigen::Array<signed char, Eigen::Dynamic, Eigen::Dynamic>;

BranchMap route_branches(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg) {
  BranchMap branch = BranchMap::Constant(V.values.rows(), V.values.cols(),
                                         static_cast<signed char>(Branch::Masked));
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      if (!f.mask(k, n) || !f.mask_chirp(k, n)) continue;
      // Inf-chirp pixels compare greater than any finite boundary and land on
      // the transient branch; a chirp rate exactly at the boundary stays on
      // the harmonic branch.
      branch(k, n) = std::abs(f.chirp_rate(k, n)) <= cfg.boundary_rad_s2
                         ? static_cast<signed char>(Branch::Set)
                         : static_cast<signed char>(Branch::Tet);
    }
  if (cfg.median_filter_branch) {
    BranchMap smoothed = branch;
    for (Eigen::Index k = 0; k < branch.rows(); ++k)
      for (Eigen::Index n = 0; n < branch.cols(); ++n) {
        if (branch(k, n) == static_cast<signed char>(Branch::Masked)) continue;
        int votes[2] = {0, 0};
        for (Eigen::Index dk = -1; dk <= 1; ++dk)
          for (Eigen::Index dn = -1; dn <= 1; ++dn) {
            const Eigen::Index kk = k + dk;
            const Eigen::Index nn = n + dn;
            if (kk < 0 || kk >= branch.rows() || nn < 0 || nn >= branch.cols()) continue;
            const signed char b = branch(kk, nn);
            if (b >= 0) ++votes[b];
          }
        if (votes[0] != votes[1])
          smoothed(k, n) = votes[0] > votes[1] ? static_cast<signed char>(Branch::Set)
                                               : static_cast<signed char>(Branch::Tet);
      }
    branch = smoothed;
  }
  return branch;
}

}  // namespace

ExtractionConfig default_extraction_config(const TFGrid& V, double gamma) {
  ExtractionConfig cfg;
  cfg.boundary_rad_s2 = std::pow(V.window.beta_s2, -2.0 / 3.0);
  cfg.freq_tolerance = V.freq_step_rad_s() / 2.0;
  cfg.time_tolerance = V.time_step_s() / 2.0;
  cfg.gamma = gamma;
  return cfg;
}

TFGrid set_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg) {
  check_config(V, cfg);
  check_fields(V, f);
  TFGrid out = V;
  out.kind = GridKind::Set;
  for (Eigen::Index k = 0; k < V.values.rows(); ++k) {
    const double omega_k = V.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      if (!f.mask(k, n) || !set_rule(f, cfg, k, n, omega_k, false)) out.values(k, n) = 0.0;
    }
  }
  return out;
}

TFGrid tet_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg) {
  check_config(V, cfg);
  check_fields(V, f);
  TFGrid out = V;
  out.kind = GridKind::Tet;
  for (Eigen::Index k = 0; k < V.values.rows(); ++k)
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      if (!f.mask(k, n) || !tet_rule(f, cfg, k, n, V.time_axis_s[n], false))
        out.values(k, n) = 0.0;
    }
  return out;
}

StetResult stet_transform(const TFGrid& V, const EstimatorFields& f, const ExtractionConfig& cfg) {
  check_config(V, cfg);
  check_fields(V, f);
  StetResult r;
  r.branch = route_branches(V, f, cfg);
  r.grid = V;
  r.grid.kind = GridKind::Stet;
  r.grid.values.setZero();
  for (Eigen::Index k = 0; k < V.values.rows(); ++k) {
    const double omega_k = V.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      const signed char b = r.branch(k, n);
      if (b == static_cast<signed char>(Branch::Set)) {
        if (set_rule(f, cfg, k, n, omega_k, false)) r.grid.values(k, n) = V.values(k, n);
      } else if (b == static_cast<signed char>(Branch::Tet)) {
        if (tet_rule(f, cfg, k, n, V.time_axis_s[n], false)) r.grid.values(k, n) = V.values(k, n);
      }
    }
  }
  return r;
}

StetResult improved_stet_transform(const TFGrid& V, const EstimatorFields& f,
                                   const ExtractionConfig& cfg) {
  check_config(V, cfg);
  check_fields(V, f);
  const TFGrid vs = rectify_for_set(V, f);
  const TFGrid vt = rectify_for_tet(V, f);
  StetResult r;
  r.branch = route_branches(V, f, cfg);
  r.grid = V;
  r.grid.kind = GridKind::Stet2;
  r.grid.values.setZero();
  for (Eigen::Index k = 0; k < V.values.rows(); ++k) {
    const double omega_k = V.freq_axis_rad_s[k];
    for (Eigen::Index n = 0; n < V.values.cols(); ++n) {
      const signed char b = r.branch(k, n);
      if (b == static_cast<signed char>(Branch::Set)) {
        // A second-order fallback pixel is located with the first-order rule
        // but still carries the rectified coefficient.
        const bool fallback = f.fallback_if2(k, n);
        if (fallback) ++r.fallback_pixel_count;
        if (set_rule(f, cfg, k, n, omega_k, !fallback)) r.grid.values(k, n) = vs.values(k, n);
      } else if (b == static_cast<signed char>(Branch::Tet)) {
        const bool fallback = f.fallback_gd2(k, n);
        if (fallback) ++r.fallback_pixel_count;
        if (tet_rule(f, cfg, k, n, V.time_axis_s[n], !fallback)) r.grid.values(k, n) = vt.values(k, n);
      }
    }
  }
  return r;
}

}  // namespace stet
