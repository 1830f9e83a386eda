#pragma once

#include "stet/transforms.hpp"

namespace stet {

struct ReconstructionResult {
  Signal s1;     // harmonic-branch part
  Signal s2;     // impulsive-branch part
  Signal total;  // s1 + s2
  // Samples unaffected by the zero-padded edge frames (half a window away
  // from both record ends).
  Eigen::Array<bool, Eigen::Dynamic, 1> interior_mask;
};

// Sums the kept harmonic-branch coefficients over frequency per time frame.
// After rectification each ridge coefficient already equals the component's
// time signal, so the column sum is the component itself (and the sum of all
// harmonic-branch components when several ridges coexist).
Signal reconstruct_harmonic(const StetResult& extracted);

// Collapses the kept impulsive-branch coefficients along time per frequency
// row into a spectrum, then inverse-transforms it with 1/(2*pi) * freq_step
// Riemann scaling. Best used with n_fft at or above the record length; the
// frequency sampling periodizes time with period n_fft samples.
Signal reconstruct_impulsive(const StetResult& extracted);

ReconstructionResult reconstruct(const StetResult& extracted);

}  // namespace stet
