// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

namespace qamsep::detail {

// Real roots of sum_k coeffs[k] x^k via the companion-matrix eigenvalues.
// Eigenvalues with |imag| <= imag_tol * max(1, |real|) count as real.
// Leading coefficients that are negligible against the largest one are trimmed.
inline std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                           double imag_tol = 1e-8) {
  double cmax = 0.0;
  for (double c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return {};

  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) <= 1e-14 * cmax) --deg;
  if (deg <= 0) return {};
  if (deg == 1) return {-coeffs[0] / coeffs[1]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  const double lead = coeffs[static_cast<std::size_t>(deg)];
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    if (i + 1 < deg) companion(i + 1, i) = 1.0;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion);
  std::vector<double> roots;
  for (int i = 0; i < deg; ++i) {
    const auto z = eig.eigenvalues()(i);
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z.real())))
      roots.push_back(z.real());
  }
  return roots;
}

}  // namespace qamsep::detail
