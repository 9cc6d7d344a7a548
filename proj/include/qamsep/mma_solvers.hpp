// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>

#include "qamsep/rotations.hpp"

namespace qamsep {

// Parameters of one plane rotation: (cos, sin) or (cosh, sinh).
struct RotationParams {
  double c = 1.0;
  double s = 0.0;
};

// Accumulated quadratic form of the multimodulus cost restricted to a givens
// rotation: J(theta) = v^T T v with v = [cos 2theta, sin 2theta] and per-sample
// t_i = [ (y_p^2 - y_q^2)/2, y_p*y_q ].
struct QuadraticFormAccumulator {
  Eigen::Matrix2d t_matrix = Eigen::Matrix2d::Zero();
};

// Accumulated system of the hyperbolic multimodulus cost with unit dispersion:
// J(gamma) = u^T R u - 2 u^T r + const, u = [cosh 2gamma, sinh 2gamma], with
// per-sample r_i = [ (y_p^2 + y_q^2)/2, y_p*y_q ].
struct HyperbolicSystem {
  Eigen::Matrix2d r_matrix = Eigen::Matrix2d::Zero();
  Eigen::Vector2d r_vector = Eigen::Vector2d::Zero();
};

// Builds T from raw row indices p < q of the stacked block. paired=true adds
// the structure partner rows as well: for q < n the partner pair is
// (p+n, q+n), for q >= n it is (q-n, p+n). paired=false accumulates only the
// (p, q) rows themselves (the (p, p+n) diagonal rotation case).
QuadraticFormAccumulator accumulate_givens_form(const RealStackedBlock& data, int p, int q,
                                                bool paired);

// Builds (R, r) over a hyperbolic rotation pair from raw rows p < q. For q < n
// the partner is (p+n, q+n) with the same sign; for q >= n the partner
// (q-n, p+n) carries the opposite rotation sign, so its cross moment enters
// negated.
HyperbolicSystem accumulate_hyperbolic_system(const RealStackedBlock& data, int p, int q);

// Unit eigenvector of T for the smallest eigenvalue, mapped to (cos, sin) by
// half-angle identities with the v1 >= 0 sign convention (theta in
// [-pi/4, pi/4]). An isotropic T returns the identity rotation.
RotationParams solve_givens_theta(const QuadraticFormAccumulator& form);

// Constrained minimizer of u^T R u - 2 u^T r over u1^2 - u2^2 = 1, u1 > 0 via
// the Lagrangian stationarity quartic in lambda; among admissible real roots
// the lowest-cost one wins, near-ties resolve to the smallest |lambda|, and an
// empty admissible set falls back to lambda = 0. The returned (cosh, sinh)
// satisfy cosh^2 - sinh^2 = 1 to machine precision.
RotationParams solve_hyperbolic_exact(const HyperbolicSystem& sys);

// Small-angle closed form gamma = atanh((r2 - R12) / (R11 + R22 - r1)) / 2 with
// the atanh argument clamped to [-0.99, 0.99]; a vanishing denominator gives
// the identity.
RotationParams solve_hyperbolic_approx(const HyperbolicSystem& sys);

// Per-stream scale factors lambda_p = sqrt(sum(y_p^2 + y_{p+n}^2) /
// sum(y_p^4 + y_{p+n}^4)) driving each complex stream toward unit dispersion;
// a zero denominator gives lambda_p = 1.
std::vector<double> compute_normalization(const RealStackedBlock& data);

// Multimodulus cost sum_i (y^2 - dispersion)^2 over the given rows (or all rows).
double mm_cost(const RealStackedBlock& data, std::span<const int> rows, double dispersion);
double mm_cost(const RealStackedBlock& data, double dispersion);

}  // namespace qamsep
