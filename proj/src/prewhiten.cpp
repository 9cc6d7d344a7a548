// SPDX-License-Identifier: Apache-2.0
#include "qamsep/prewhiten.hpp"

#include <cmath>
#include <stdexcept>

#include "qamsep/errors.hpp"

namespace qamsep {

Whitener fit_whitener(const SampleBlock& received, int n_sources, WhitenMode mode) {
  const int n_rx = static_cast<int>(received.rows());
  const int n_samples = static_cast<int>(received.cols());
  if (n_sources <= 0 || n_sources > n_rx)
    throw std::invalid_argument("fit_whitener: need 0 < n_sources <= n_rx");
  if (n_samples < n_sources)
    throw DegenerateData("fit_whitener: fewer samples than sources");

  const Eigen::MatrixXcd cov =
      (received * received.adjoint()) / static_cast<double>(n_samples);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw DegenerateData("fit_whitener: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top n_sources, descending.
  const auto& vals = eig.eigenvalues();
  const auto& vecs = eig.eigenvectors();
  const double lmax = vals(n_rx - 1);
  const double lmin = vals(n_rx - n_sources);
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw DegenerateData("fit_whitener: dominant eigenvalues are rank deficient");

  Eigen::MatrixXcd b(n_sources, n_rx);
  for (int k = 0; k < n_sources; ++k) {
    const int src = n_rx - 1 - k;
    const double scale =
        mode == WhitenMode::covariance_whitening ? 1.0 / std::sqrt(vals(src)) : 1.0;
    b.row(k) = scale * vecs.col(src).adjoint();
  }
  return {b, mode};
}

SampleBlock apply_whitener(const Whitener& w, const SampleBlock& received) {
  if (w.b.cols() != received.rows())
    throw std::invalid_argument("apply_whitener: dimension mismatch");
  return w.b * received;
}

}  // namespace qamsep
