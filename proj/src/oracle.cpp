// SPDX-License-Identifier: Apache-2.0
#include "qamsep/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qamsep/mma_solvers.hpp"

namespace qamsep {

namespace {

// Copies the touched rows into a 2- or 4-row scratch block, applies the
// candidate rotation pair there and evaluates the requested raw cost.
struct PairScan {
  RealStackedBlock scratch;            // touched rows only, repeatedly overwritten
  Eigen::MatrixXd pristine;            // untouched copy of those rows
  std::array<int, 4> scratch_rows{};   // rows of scratch forming the pair
  int n_rows = 0;
  RotationKind kind = RotationKind::givens;
  bool cross = false;
  bool diagonal = false;

  PairScan(const RealStackedBlock& data, int p, int q, RotationKind k) {
    const int n = data.n_streams();
    if (p < 0 || q <= p || q >= 2 * n) throw std::invalid_argument("oracle: bad row indices");
    kind = k;
    diagonal = q == p + n;
    cross = !diagonal && q >= n;
    std::array<int, 4> src{};
    if (diagonal) {
      n_rows = 2;
      src = {p, q, 0, 0};
    } else {
      n_rows = 4;
      const int pa = cross ? q - n : p + n;
      const int pb = cross ? p + n : q + n;
      src = {p, q, pa, pb};
    }
    pristine.resize(n_rows, data.n_samples());
    for (int r = 0; r < n_rows; ++r) {
      pristine.row(r) = data.data.row(src[static_cast<std::size_t>(r)]);
      scratch_rows[static_cast<std::size_t>(r)] = r;
    }
    scratch.data.resize(n_rows, data.n_samples());
  }

  double cost_at(double x, OracleCriterion criterion, double d_or_dispersion) {
    scratch.data = pristine;
    const double c = kind == RotationKind::givens ? std::cos(x) : std::cosh(x);
    const double s = kind == RotationKind::givens ? std::sin(x) : std::sinh(x);
    apply_plane(0, 1, c, s);
    if (!diagonal) {
      // Hyperbolic cross partner rotates by -x; cosh is even so c carries over.
      const double s2 = (kind == RotationKind::hyperbolic && cross) ? -s : s;
      apply_plane(2, 3, c, s2);
    }
    std::array<int, 4> rows = scratch_rows;
    std::span<const int> span(rows.data(), static_cast<std::size_t>(n_rows));
    return criterion == OracleCriterion::multimodulus ? mm_cost(scratch, span, d_or_dispersion)
                                                      : ama_cost(scratch, span, d_or_dispersion);
  }

 private:
  void apply_plane(int a, int b, double c, double s) {
    const Eigen::RowVectorXd ra = scratch.data.row(a);
    const Eigen::RowVectorXd rb = scratch.data.row(b);
    if (kind == RotationKind::givens) {
      scratch.data.row(a) = c * ra + s * rb;
      scratch.data.row(b) = -s * ra + c * rb;
    } else {
      scratch.data.row(a) = c * ra + s * rb;
      scratch.data.row(b) = s * ra + c * rb;
    }
  }
};

GridMinResult scan(PairScan& ps, OracleCriterion criterion, double d_or_dispersion, double lo,
                   double hi, double step) {
  GridMinResult best;
  best.param = lo;
  best.cost = ps.cost_at(lo, criterion, d_or_dispersion);
  const auto n_steps = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long k = 1; k <= n_steps; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    const double f = ps.cost_at(x, criterion, d_or_dispersion);
    if (f < best.cost) {
      best.cost = f;
      best.param = x;
    }
  }
  return best;
}

}  // namespace

GridMinResult grid_min_givens(const RealStackedBlock& data, int p, int q,
                              OracleCriterion criterion, double d_or_dispersion,
                              double grid_step) {
  PairScan ps(data, p, q, RotationKind::givens);
  const double b = std::numbers::pi / 4.0;
  return scan(ps, criterion, d_or_dispersion, -b, b, grid_step);
}

GridMinResult grid_min_hyperbolic(const RealStackedBlock& data, int p, int q,
                                  OracleCriterion criterion, double d_or_dispersion,
                                  double grid_step, double bound) {
  PairScan ps(data, p, q, RotationKind::hyperbolic);
  return scan(ps, criterion, d_or_dispersion, -bound, bound, grid_step);
}

}  // namespace qamsep
