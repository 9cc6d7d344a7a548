// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qamsep/ama_solvers.hpp"
#include "qamsep/constellation.hpp"
#include "qamsep/prewhiten.hpp"
#include "qamsep/rotations.hpp"

namespace qamsep {

enum class Algorithm { g_mma, hg_mma, g_ama, hg_ama };
enum class SolverMode { exact, approximate };

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::g_mma;
  int n_sweeps = 5;
  int n_warmstart = 5;  // multimodulus warm-start sweeps of the alphabet-matched variants
  SolverMode solver_mode = SolverMode::approximate;
  WhitenMode whitening_mode = WhitenMode::covariance_whitening;
  bool trace_rotations = false;  // record the global multimodulus cost after every rotation
};

// Defaults used throughout the experiments: 5 sweeps for the multimodulus
// variants, 5 warm-start + 3 alphabet-matched sweeps for the others, and
// covariance whitening everywhere.
AlgorithmConfig default_config(Algorithm algorithm);

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

struct SeparationReport {
  StructuredSeparator separator;       // stacked real form
  Eigen::MatrixXcd complex_separator;  // n x n complex V
  Eigen::MatrixXcd combined_w;         // V * B, filled by separate()
  SampleBlock separated;               // outputs after the final sweep
  std::vector<double> cost_per_sweep;  // multimodulus cost; alphabet-matched after warm-start
  std::vector<double> rotation_costs;  // per-rotation global cost, if traced
  int sweeps_used = 0;
  double wall_seconds = 0.0;
};

// Jacobi-style sweep drivers. All of them mutate `data` in place (the caller
// keeps a copy if needed) and expect it already reduced to n_sources streams:
// whitened for the givens-only variants, whitened or subspace-projected for
// the hyperbolic ones.
SeparationReport run_g_mma(RealStackedBlock& data, const AlgorithmConfig& cfg,
                           const ConstellationSpec& spec);
SeparationReport run_hg_mma(RealStackedBlock& data, const AlgorithmConfig& cfg,
                            const ConstellationSpec& spec);
SeparationReport run_g_ama(RealStackedBlock& data, const AlgorithmConfig& cfg,
                           const ConstellationSpec& spec);
SeparationReport run_hg_ama(RealStackedBlock& data, const AlgorithmConfig& cfg,
                            const ConstellationSpec& spec);
SeparationReport run_algorithm(RealStackedBlock& data, const AlgorithmConfig& cfg,
                               const ConstellationSpec& spec);

// Whitens/projects the received block per cfg.whitening_mode, runs the
// configured algorithm and fills combined_w = V * B.
SeparationReport separate(const SampleBlock& received, int n_sources, const AlgorithmConfig& cfg,
                          const ConstellationSpec& spec);

}  // namespace qamsep
