// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace qamsep {

// Square QAM alphabet normalized to unit average symbol power.
// Real and imaginary parts each take levels scale * {+-1, +-3, ..., +-(sqrt(order)-1)},
// so half_spacing (half the minimum distance between points) equals scale.
// dispersion is the per-axis fourth/second moment ratio E[s_R^4]/E[s_R^2] of the
// normalized alphabet, the target constant of the multimodulus criterion.
struct ConstellationSpec {
  int order = 4;
  double half_spacing = 0.0;
  double scale = 0.0;
  double dispersion = 0.0;
};

// order must be one of {4, 16, 64, 256}; anything else throws std::invalid_argument.
ConstellationSpec build_constellation(int order);

// All `order` points of the normalized alphabet, row-major over (real, imag) levels.
std::vector<std::complex<double>> constellation_points(const ConstellationSpec& spec);

// Nearest alphabet level for one axis value, clamped to the outermost level.
double nearest_level(const ConstellationSpec& spec, double value);

// Nearest alphabet point (per-axis quantization; exact for points on the lattice).
std::complex<double> nearest_point(const ConstellationSpec& spec, std::complex<double> value);

}  // namespace qamsep
