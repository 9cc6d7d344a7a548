// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "qamsep/signal_model.hpp"

namespace qamsep {

enum class WhitenMode { covariance_whitening, subspace_projection };

struct Whitener {
  Eigen::MatrixXcd b;  // n_sources x n_rx
  WhitenMode mode = WhitenMode::covariance_whitening;
};

// Fits B from the sample covariance C = Y*Y^H / n_samples using its dominant
// n_sources eigenpairs: B = L^(-1/2) U^H (covariance_whitening, output covariance
// is the identity) or B = U^H (subspace_projection, orthonormal rows, no
// rescaling). Throws DegenerateData when the dominant eigenvalues are not
// usable (too few samples, dominant ratio above 1e12 or non-positive).
Whitener fit_whitener(const SampleBlock& received, int n_sources, WhitenMode mode);

SampleBlock apply_whitener(const Whitener& w, const SampleBlock& received);

}  // namespace qamsep
