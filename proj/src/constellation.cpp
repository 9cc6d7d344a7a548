// SPDX-License-Identifier: Apache-2.0
#include "qamsep/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qamsep {

ConstellationSpec build_constellation(int order) {
  if (order != 4 && order != 16 && order != 64 && order != 256)
    throw std::invalid_argument("constellation order must be 4, 16, 64 or 256");

  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  // Unnormalized per-axis moments over levels {+-1, +-3, ..., +-(m-1)}.
  double m2 = 0.0, m4 = 0.0;
  for (int l = 1; l < m; l += 2) {
    m2 += 2.0 * l * l;
    m4 += 2.0 * std::pow(static_cast<double>(l), 4.0);
  }
  m2 /= m;
  m4 /= m;

  ConstellationSpec spec;
  spec.order = order;
  spec.scale = 1.0 / std::sqrt(2.0 * m2);  // unit average symbol power
  spec.half_spacing = spec.scale;
  spec.dispersion = (m4 / m2) * spec.scale * spec.scale;
  return spec;
}

std::vector<std::complex<double>> constellation_points(const ConstellationSpec& spec) {
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.order))));
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(spec.order));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      pts.emplace_back(spec.scale * (2 * a - (m - 1)), spec.scale * (2 * b - (m - 1)));
  return pts;
}

double nearest_level(const ConstellationSpec& spec, double value) {
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.order))));
  const double u = value / spec.scale;                     // lattice units
  int idx = static_cast<int>(std::lround((u + (m - 1)) / 2.0));
  idx = std::clamp(idx, 0, m - 1);
  return spec.scale * (2 * idx - (m - 1));
}

std::complex<double> nearest_point(const ConstellationSpec& spec, std::complex<double> value) {
  return {nearest_level(spec, value.real()), nearest_level(spec, value.imag())};
}

}  // namespace qamsep
