// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qamsep/constellation.hpp"

namespace qamsep {

// Complex baseband block: one row per stream/antenna, one column per sample.
using SampleBlock = Eigen::MatrixXcd;

struct ChannelInstance {
  Eigen::MatrixXcd mixing;        // n_rx x n_tx, full column rank
  double noise_variance = 0.0;    // per receive antenna, set by transmit()
  double condition_bound = 0.0;   // the bound the draw was accepted under
};

// i.i.d. uniform draw over the alphabet; identical seeds give identical blocks.
SampleBlock draw_sources(const ConstellationSpec& spec, int n_sources, int n_samples,
                         std::uint64_t seed);

// i.i.d. unit-variance complex Gaussian entries, rejection-resampled until the
// 2-norm condition number is <= condition_bound (pass +inf to accept the first
// draw). Throws GenerationFailure after 1000 rejected draws.
ChannelInstance draw_channel(int n_rx, int n_tx, double condition_bound, std::uint64_t seed);

// Y = A*S + N with white complex Gaussian noise. snr_db fixes the average
// per-receive-antenna signal-to-noise ratio measured on the actual mixed block:
// noise_variance = (|A*S|_F^2 / (n_samples * n_rx)) / 10^(snr_db/10).
// snr_db = +inf transmits noiselessly. The variance used is stored back into
// channel.noise_variance.
SampleBlock transmit(ChannelInstance& channel, const SampleBlock& sources, double snr_db,
                     std::uint64_t seed);

}  // namespace qamsep
