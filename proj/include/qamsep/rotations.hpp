// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qamsep/signal_model.hpp"

namespace qamsep {

// Real/imaginary stacking of a complex block: rows [0, n) hold real parts,
// rows [n, 2n) imaginary parts of the corresponding complex stream. Stored
// row-major so the per-stream sample runs the rotations sweep over stay
// contiguous regardless of the block height.
struct RealStackedBlock {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      data;  // 2*n_streams x n_samples

  int n_streams() const { return static_cast<int>(data.rows()) / 2; }
  int n_samples() const { return static_cast<int>(data.cols()); }
};

RealStackedBlock stack(const SampleBlock& block);
SampleBlock unstack(const RealStackedBlock& block);

// 2n x 2n real separator constrained to [[V_R, -V_I], [V_I, V_R]], the stacked
// image of a complex n x n separator V_R + i*V_I.
struct StructuredSeparator {
  Eigen::MatrixXd m;

  static StructuredSeparator identity(int n_streams);
  int n_streams() const { return static_cast<int>(m.rows()) / 2; }

  // Max block-structure violation relative to max(1, |m|_max).
  double structure_residual() const;
  // Averages the mirrored blocks back onto the exact structure.
  void resymmetrize();
  Eigen::MatrixXcd to_complex() const;  // V_R + i*V_I
};

enum class RotationKind { givens, hyperbolic, normalization };

// One plane rotation acting on rows (p, q) of a stacked block. For givens the
// action is [c s; -s c] with c^2+s^2 = 1, for hyperbolic [c s; s c] with
// c^2-s^2 = 1 (c = cosh, s = sinh). Normalization rotations go through
// apply_normalization instead.
struct PlaneRotation {
  RotationKind kind = RotationKind::givens;
  int p = 0;
  int q = 0;
  double c = 1.0;
  double s = 0.0;
};

// The three row pairings that keep the separator structure intact:
//   direct:   {(p, q), (p+n, q+n)} sharing the parameter,
//   cross:    {(p, q+n), (q, p+n)} sharing it (hyperbolic: second gets -s),
//   diagonal: the single (p, p+n) givens rotation passed as both arguments.
enum class PairPattern { direct, cross, diagonal };

// Builds the two rotations of a structure-preserving pair from stream indices
// p < q < n_streams (diagonal: q ignored, may equal p).
std::pair<PlaneRotation, PlaneRotation> make_pair_rotations(RotationKind kind, PairPattern pattern,
                                                            int n_streams, int p, int q, double c,
                                                            double s);

// Applies a validated rotation pair in place to the data block and separator.
// The two rotations must form one of the patterns above; anything else throws
// std::invalid_argument.
void apply_rotation_pair(RealStackedBlock& data, StructuredSeparator& separator,
                         const PlaneRotation& a, const PlaneRotation& b);

// Scales rows (p, p+n) by lambdas[p] > 0 for every stream p.
void apply_normalization(RealStackedBlock& data, StructuredSeparator& separator,
                         const std::vector<double>& lambdas);

}  // namespace qamsep
