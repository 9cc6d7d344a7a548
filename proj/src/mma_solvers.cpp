// SPDX-License-Identifier: Apache-2.0
#include "qamsep/mma_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qamsep/detail/polyroots.hpp"

namespace qamsep {

namespace {

struct RowPair {
  int a;
  int b;
};

// Structure partner of a raw row pair: (p, q) with q < n pairs with
// (p+n, q+n); the cross pair (p, q+n) with (q, p+n).
RowPair partner_rows(int n, int p, int q) {
  if (q < n) return {p + n, q + n};
  return {q - n, p + n};
}

void check_rows(const RealStackedBlock& d, int p, int q) {
  if (p < 0 || q <= p || q >= 2 * d.n_streams() || p >= 2 * d.n_streams())
    throw std::invalid_argument("row indices out of range");
}

void accumulate_t(const RealStackedBlock& d, int p, int q, Eigen::Matrix2d& t) {
  const auto& m = d.data;
  for (int i = 0; i < d.n_samples(); ++i) {
    const double yp = m(p, i);
    const double yq = m(q, i);
    const double t1 = 0.5 * (yp * yp - yq * yq);
    const double t2 = yp * yq;
    t(0, 0) += t1 * t1;
    t(0, 1) += t1 * t2;
    t(1, 1) += t2 * t2;
  }
}

void accumulate_r(const RealStackedBlock& d, int p, int q, double cross_sign,
                  Eigen::Matrix2d& r_mat, Eigen::Vector2d& r_vec) {
  const auto& m = d.data;
  for (int i = 0; i < d.n_samples(); ++i) {
    const double yp = m(p, i);
    const double yq = m(q, i);
    const double r1 = 0.5 * (yp * yp + yq * yq);
    const double r2 = cross_sign * yp * yq;
    r_mat(0, 0) += r1 * r1;
    r_mat(0, 1) += r1 * r2;
    r_mat(1, 1) += r2 * r2;
    r_vec(0) += r1;
    r_vec(1) += r2;
  }
}

// Half-angle map from a unit direction with v1 >= 0 to rotation parameters.
RotationParams trig_half_angle(double v1, double v2) {
  const double c = std::sqrt((1.0 + v1) / 2.0);
  const double s = v2 / std::sqrt(2.0 * (1.0 + v1));
  return {c, s};
}

// Pair-restricted multimodulus cost (constants dropped) of the rotation
// (c, s): u^T R u - 2 r^T u with u = [cosh(2g), sinh(2g)]. This is exact, not
// a small-angle model, so comparing against the identity (u = [1, 0]) tells
// whether a candidate step genuinely helps.
double hyperbolic_pair_cost(const HyperbolicSystem& sys, double c, double s) {
  const double u1 = c * c + s * s;
  const double u2 = 2.0 * c * s;
  return u1 * (sys.r_matrix(0, 0) * u1 + sys.r_matrix(0, 1) * u2) +
         u2 * (sys.r_matrix(0, 1) * u1 + sys.r_matrix(1, 1) * u2) -
         2.0 * (sys.r_vector(0) * u1 + sys.r_vector(1) * u2);
}

}  // namespace

QuadraticFormAccumulator accumulate_givens_form(const RealStackedBlock& data, int p, int q,
                                                bool paired) {
  check_rows(data, p, q);
  QuadraticFormAccumulator form;
  accumulate_t(data, p, q, form.t_matrix);
  if (paired) {
    const RowPair pr = partner_rows(data.n_streams(), p, q);
    accumulate_t(data, pr.a, pr.b, form.t_matrix);
  }
  form.t_matrix(1, 0) = form.t_matrix(0, 1);
  return form;
}

HyperbolicSystem accumulate_hyperbolic_system(const RealStackedBlock& data, int p, int q) {
  check_rows(data, p, q);
  const int n = data.n_streams();
  HyperbolicSystem sys;
  accumulate_r(data, p, q, 1.0, sys.r_matrix, sys.r_vector);
  const RowPair pr = partner_rows(n, p, q);
  accumulate_r(data, pr.a, pr.b, q < n ? 1.0 : -1.0, sys.r_matrix, sys.r_vector);
  sys.r_matrix(1, 0) = sys.r_matrix(0, 1);
  return sys;
}

RotationParams solve_givens_theta(const QuadraticFormAccumulator& form) {
  const double a = form.t_matrix(0, 0);
  const double b = form.t_matrix(0, 1);
  const double c = form.t_matrix(1, 1);
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  const double spread = std::hypot(a - c, 2.0 * b);
  if (scale == 0.0 || spread <= 1e-12 * scale) return {1.0, 0.0};  // isotropic: identity

  const double lmin = 0.5 * ((a + c) - spread);
  Eigen::Vector2d v1(b, lmin - a);
  Eigen::Vector2d v2(lmin - c, b);
  Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
  v.normalize();
  if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
  return trig_half_angle(v(0), v(1));
}

RotationParams solve_hyperbolic_exact(const HyperbolicSystem& sys) {
  const double r11 = sys.r_matrix(0, 0);
  const double r12 = sys.r_matrix(0, 1);
  const double r22 = sys.r_matrix(1, 1);
  const double r1 = sys.r_vector(0);
  const double r2 = sys.r_vector(1);

  const double scale = std::max({std::abs(r11), std::abs(r12), std::abs(r22), 1.0});

  // u(lambda) = (R + lambda*J)^(-1) r with J = diag(1,-1); the hyperbola
  // constraint turns into a quartic in lambda:
  //   w1(lambda)^2 - w2(lambda)^2 - det(lambda)^2 = 0,
  // where w = adj(R + lambda*J) r.
  const double a1 = r22 * r1 - r12 * r2, b1 = -r1;
  const double a2 = r11 * r2 - r12 * r1, b2 = r2;
  const double c0 = r11 * r22 - r12 * r12, c1 = r22 - r11, c2 = -1.0;

  const std::vector<double> quartic = {
      a1 * a1 - a2 * a2 - c0 * c0,
      2.0 * (a1 * b1 - a2 * b2) - 2.0 * c0 * c1,
      b1 * b1 - b2 * b2 - c1 * c1 - 2.0 * c0 * c2,
      -2.0 * c1 * c2,
      -c2 * c2};

  auto evaluate = [&](double lambda, double& u1, double& u2) {
    const double det = (r11 + lambda) * (r22 - lambda) - r12 * r12;
    if (std::abs(det) <= 1e-12 * scale * scale) return false;
    u1 = ((r22 - lambda) * r1 - r12 * r2) / det;
    u2 = (-r12 * r1 + (r11 + lambda) * r2) / det;
    if (!(u1 > 0.0)) return false;
    const double h = u1 * u1 - u2 * u2;
    if (!(h > 1e-12)) return false;
    const double inv = 1.0 / std::sqrt(h);
    u1 *= inv;
    u2 *= inv;
    return true;
  };
  auto cost = [&](double u1, double u2) {
    return u1 * (r11 * u1 + r12 * u2) + u2 * (r12 * u1 + r22 * u2) - 2.0 * (r1 * u1 + r2 * u2);
  };

  bool found = false;
  double best_cost = std::numeric_limits<double>::infinity();
  double best_lambda = 0.0, best_u1 = 1.0, best_u2 = 0.0;
  for (double lambda : detail::poly_real_roots(quartic)) {
    double u1, u2;
    if (!evaluate(lambda, u1, u2)) continue;
    const double f = cost(u1, u2);
    const double tol = 1e-9 * (1.0 + std::abs(best_cost));
    const bool better = !found || f < best_cost - tol ||
                        (std::abs(f - best_cost) <= tol && std::abs(lambda) < std::abs(best_lambda));
    if (better) {
      found = true;
      best_cost = f;
      best_lambda = lambda;
      best_u1 = u1;
      best_u2 = u2;
    }
  }

  if (!found) {
    double u1, u2;
    if (!evaluate(0.0, u1, u2)) return {1.0, 0.0};
    best_u1 = u1;
    best_u2 = u2;
  }
  const RotationParams rp = trig_half_angle(best_u1, best_u2);
  if (hyperbolic_pair_cost(sys, rp.c, rp.s) >= hyperbolic_pair_cost(sys, 1.0, 0.0))
    return {1.0, 0.0};
  return rp;
}

RotationParams solve_hyperbolic_approx(const HyperbolicSystem& sys) {
  const double den = sys.r_matrix(0, 0) + sys.r_matrix(1, 1) - sys.r_vector(0);
  const double num = sys.r_vector(1) - sys.r_matrix(0, 1);
  // The linearized stationarity condition tanh(2*gamma) = num/den only has a
  // solution for |num| < den; den is the curvature of the linearized cost at
  // zero, so a non-positive value means zero sits near a local maximum and
  // the small-angle premise is void. Leave such pairs untouched and let a
  // later sweep revisit them instead of taking an arbitrarily large step.
  if (!(den > 0.0) || std::abs(num) >= den) return {1.0, 0.0};
  const double gamma = 0.5 * std::atanh(num / den);
  const RotationParams rp{std::cosh(gamma), std::sinh(gamma)};
  // The stationary point of the linearized cost can sit far outside the
  // small-angle regime it was derived in; reject it when the exact
  // pair-restricted cost says it is worse than doing nothing.
  if (hyperbolic_pair_cost(sys, rp.c, rp.s) >= hyperbolic_pair_cost(sys, 1.0, 0.0))
    return {1.0, 0.0};
  return rp;
}

std::vector<double> compute_normalization(const RealStackedBlock& data) {
  const int n = data.n_streams();
  std::vector<double> lambdas(static_cast<std::size_t>(n), 1.0);
  for (int p = 0; p < n; ++p) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < data.n_samples(); ++i) {
      const double a = data.data(p, i);
      const double b = data.data(p + n, i);
      num += a * a + b * b;
      den += a * a * a * a + b * b * b * b;
    }
    if (den > 0.0) lambdas[static_cast<std::size_t>(p)] = std::sqrt(num / den);
  }
  return lambdas;
}

double mm_cost(const RealStackedBlock& data, std::span<const int> rows, double dispersion) {
  double cost = 0.0;
  for (int r : rows)
    for (int i = 0; i < data.n_samples(); ++i) {
      const double y2 = data.data(r, i) * data.data(r, i);
      cost += (y2 - dispersion) * (y2 - dispersion);
    }
  return cost;
}

double mm_cost(const RealStackedBlock& data, double dispersion) {
  std::vector<int> rows(static_cast<std::size_t>(2 * data.n_streams()));
  for (int r = 0; r < 2 * data.n_streams(); ++r) rows[static_cast<std::size_t>(r)] = r;
  return mm_cost(data, rows, dispersion);
}

}  // namespace qamsep
