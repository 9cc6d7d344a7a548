// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

#include "qamsep/mma_solvers.hpp"
#include "qamsep/rotations.hpp"

namespace qamsep {

// Alphabet-matched nonlinearity 1 - sin^2(x*pi/(2d)): zero exactly at the odd
// multiples of the half spacing d, maximal between them.
double cme(double x, double d);

// Alphabet-matched cost sum_i cme(y_{r,i}, d) over the given rows (or all rows).
double ama_cost(const RealStackedBlock& data, std::span<const int> rows, double d);
double ama_cost(const RealStackedBlock& data, double d);

enum class AmaFamily { givens, hyperbolic_pair1, hyperbolic_pair2 };
enum class HyperbolicPair { pair1, pair2 };
enum class AmaMode { exact, approximate };

// Fourth-order Taylor model of the alphabet-matched cost restricted to one
// structure-preserving rotation pair,
//   J(x) ~= C4/(48 d^4) x^4 + C3/(12 d^3) x^3 + C2/(4 d^2) x^2 + C1/(2 d) x + C0/2,
// where x is the rotation angle (givens) or hyperbolic parameter. The family
// sign conventions (odd-term flips on counter-rotated rows, negated even terms
// of the hyperbolic expansion) are folded into the stored C coefficients, so
// evaluation is uniform across families.
struct AmaPolynomial {
  std::array<double, 5> coeff{};  // C0..C4
  double half_spacing = 1.0;
  AmaFamily family = AmaFamily::givens;

  double value(double x) const;
  double gradient(double x) const;
  // Ascending coefficients of the gradient cubic
  // C1/(2d) + C2/(2d^2) x + C3/(4d^3) x^2 + C4/(12d^4) x^3.
  std::array<double, 4> gradient_coeffs() const;
};

// Model over the givens pair rooted at raw rows (p, q): for q < n the pair
// {(p,q), (p+n,q+n)}, for q >= n the cross pair {(p,q), (q-n,p+n)}, both
// rotated by the same angle.
AmaPolynomial build_ama_polynomial_givens(const RealStackedBlock& data, int p, int q, double d);

// Model over a hyperbolic pair rooted at raw rows (p, q). pair must agree with
// the index form: pair1 requires q < n (partner (p+n, q+n), same parameter),
// pair2 requires q >= n (partner (q-n, p+n), negated parameter).
AmaPolynomial build_ama_polynomial_hyperbolic(const RealStackedBlock& data, int p, int q, double d,
                                              HyperbolicPair pair);

// Angle minimizing the alphabet-matched cost restricted to the givens pair at
// raw rows (p, q). exact: golden-section search of the true rotated cost over
// [-pi/4, pi/4] (tolerance 1e-6); approximate: real roots of the model's
// gradient cubic. Both modes evaluate the true restricted cost over the
// candidate set (always including the zero rotation) and return the best, so
// the result never exceeds the zero-rotation cost.
RotationParams solve_ama_givens(const RealStackedBlock& data, int p, int q, double d,
                                AmaMode mode);

// Hyperbolic counterpart over [-1, 1] with the result clamped to |gamma| <= 1.
RotationParams solve_ama_hyperbolic(const RealStackedBlock& data, int p, int q, double d,
                                    HyperbolicPair pair, AmaMode mode);

}  // namespace qamsep
