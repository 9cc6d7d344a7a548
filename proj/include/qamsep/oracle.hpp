// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qamsep/ama_solvers.hpp"
#include "qamsep/rotations.hpp"

namespace qamsep {

enum class OracleCriterion { multimodulus, alphabet_matched };

struct GridMinResult {
  double param = 0.0;
  double cost = 0.0;
};

// Brute-force references for the closed-form solvers: scan the rotation
// parameter on a uniform grid, materialize the rotated rows of the pair rooted
// at raw rows (p, q) (q >= n selects the cross pair, q == p + n the single
// diagonal rotation) and evaluate the true restricted cost directly.
// d_or_dispersion is the dispersion constant (multimodulus) or the half
// spacing (alphabet_matched). No solver code path is involved.
GridMinResult grid_min_givens(const RealStackedBlock& data, int p, int q,
                              OracleCriterion criterion, double d_or_dispersion,
                              double grid_step);

// Hyperbolic counterpart over gamma in [-bound, bound].
GridMinResult grid_min_hyperbolic(const RealStackedBlock& data, int p, int q,
                                  OracleCriterion criterion, double d_or_dispersion,
                                  double grid_step, double bound);

}  // namespace qamsep
