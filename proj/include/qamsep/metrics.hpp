// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qamsep/constellation.hpp"
#include "qamsep/signal_model.hpp"

namespace qamsep {

// Global system G = W * A with the permutation/phase ambiguity resolved:
// assignment[j] is the source matched to output j and gains[j] the complex
// gain G(j, assignment[j]) at the match.
struct GlobalSystem {
  Eigen::MatrixXcd g;
  std::vector<int> assignment;
  std::vector<std::complex<double>> gains;
};

// Greedy matching by descending |G(i,j)| with used rows/columns removed.
// Throws DegenerateSeparation if a matched gain is exactly zero.
GlobalSystem resolve_ambiguity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& mixing);

// Average output SINR in dB. Per output j matched to source k:
//   SINR_j = |g_jk|^2 ||s_k||^2 / (sum_{l != k} |g_jl|^2 ||s_l||^2 + N_s w_j R_n w_j^H)
// with R_n = noise_variance * I. Each term is capped at +300 dB (noiseless
// perfect separation); the outputs are averaged in the dB domain.
double compute_sinr(const GlobalSystem& sys, const SampleBlock& sources,
                    const Eigen::MatrixXcd& w, double noise_variance);

// Symbol error rate after undoing the matched complex gain and per-axis
// nearest-level demapping, averaged over all outputs and samples.
double demap_and_ser(const GlobalSystem& sys, const SampleBlock& separated,
                     const SampleBlock& sources, const ConstellationSpec& spec);

// Residual interference of the resolved system in dB: total unmatched power
// over total matched power, sum_j sum_{l != k(j)} |g_jl|^2 / sum_j |g_jk|^2.
double interference_db(const GlobalSystem& sys);

}  // namespace qamsep
