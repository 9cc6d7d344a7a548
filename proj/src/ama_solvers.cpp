// SPDX-License-Identifier: Apache-2.0
#include "qamsep/ama_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qamsep/detail/polyroots.hpp"

namespace qamsep {

namespace {

constexpr double kPi = std::numbers::pi;

struct Slot {
  int a;        // row whose nonlinearity is expanded
  int b;        // partner row feeding the rotation
  double sign;  // sign of the parameter as seen by row a
};

// Raw Taylor coefficients of cme(z_a(x), d) around x = 0 for z_a = cos(x) y_a
// + sin(x) y_b (givens) or cosh(x) y_a + sinh(x) y_b (hyperbolic), before the
// family sign conventions are applied.
struct SlotCoeffs {
  double c0, c1, c2, c3, c4;
};

SlotCoeffs givens_slot(double yp, double yq, double d) {
  const double arg = kPi * yp / d;
  const double sn = std::sin(arg);
  const double cs = std::cos(arg);
  const double p2 = kPi * kPi, p3 = p2 * kPi, p4 = p3 * kPi;
  SlotCoeffs c;
  c.c4 = 4.0 * p2 * d * d * yq * yq * cs + p4 * yq * yq * yq * yq * cs -
         3.0 * p2 * d * d * yp * yp * cs - kPi * d * d * d * yp * sn -
         6.0 * p3 * d * yp * yq * yq * sn;
  c.c3 = kPi * d * d * yq * sn + p3 * yq * yq * yq * sn + 3.0 * p2 * d * yp * yq * cs;
  c.c2 = kPi * d * yp * sn - p2 * yq * yq * cs;
  c.c1 = kPi * yq * sn;
  c.c0 = 1.0 + cs;
  return c;
}

SlotCoeffs hyper_slot(double yp, double yq, double d) {
  const double arg = kPi * yp / d;
  const double sn = std::sin(arg);
  const double cs = std::cos(arg);
  const double p2 = kPi * kPi, p3 = p2 * kPi, p4 = p3 * kPi;
  SlotCoeffs c;
  c.c4 = p4 * yq * yq * yq * yq * cs + 6.0 * p3 * d * yp * yq * yq * sn -
         4.0 * p2 * d * d * yq * yq * cs - 3.0 * p2 * d * d * yp * yp * cs -
         kPi * d * d * d * yp * sn;
  c.c3 = p3 * yq * yq * yq * sn - kPi * d * d * yq * sn - 3.0 * p2 * d * yp * yq * cs;
  c.c2 = p2 * yq * yq * cs + kPi * d * yp * sn;
  c.c1 = kPi * yq * sn;
  c.c0 = 1.0 + cs;
  return c;
}

void check_rows(const RealStackedBlock& d, int p, int q) {
  if (p < 0 || q <= p || q >= 2 * d.n_streams())
    throw std::invalid_argument("row indices out of range");
}

// The four (row, partner, sign) slots touched by the rotation pair rooted at
// raw rows (p, q). For givens the sign flips on the counter-rotated row of
// each rotation; for hyperbolic it flips only on the pair2 partner rotation.
std::array<Slot, 4> pair_slots(RotationKind kind, int n, int p, int q) {
  const bool cross = q >= n;
  const int pa = cross ? q - n : p + n;  // partner rotation rows
  const int pb = cross ? p + n : q + n;
  const double flip = kind == RotationKind::givens ? -1.0 : 1.0;
  if (!cross) return {{{p, q, 1.0}, {q, p, flip}, {pa, pb, 1.0}, {pb, pa, flip}}};
  const double s2 = kind == RotationKind::hyperbolic ? -1.0 : 1.0;  // pair2 parameter sign
  return {{{p, q, 1.0}, {q, p, flip}, {pa, pb, s2}, {pb, pa, s2 * flip}}};
}

AmaPolynomial build_polynomial(const RealStackedBlock& data, int p, int q, double d,
                               RotationKind kind) {
  check_rows(data, p, q);
  const int n = data.n_streams();
  const auto slots = pair_slots(kind, n, p, q);

  AmaPolynomial poly;
  poly.half_spacing = d;
  if (kind == RotationKind::givens)
    poly.family = AmaFamily::givens;
  else
    poly.family = q < n ? AmaFamily::hyperbolic_pair1 : AmaFamily::hyperbolic_pair2;

  const double even = kind == RotationKind::givens ? 1.0 : -1.0;  // x^2 sign convention
  for (const Slot& sl : slots) {
    for (int i = 0; i < data.n_samples(); ++i) {
      const double ya = data.data(sl.a, i);
      const double yb = data.data(sl.b, i);
      const SlotCoeffs c =
          kind == RotationKind::givens ? givens_slot(ya, yb, d) : hyper_slot(ya, yb, d);
      poly.coeff[0] += c.c0;
      poly.coeff[1] += -sl.sign * c.c1;
      poly.coeff[2] += even * c.c2;
      poly.coeff[3] += sl.sign * c.c3;
      poly.coeff[4] += c.c4;
    }
  }
  return poly;
}

template <typename F>
double golden_section_min(const F& f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Local minimization from a seed: expand a bracket downhill in geometrically
// growing steps until the cost rises or a bound is hit, then golden-section
// inside. The alphabet-matched cost oscillates over the full parameter range,
// so a whole-interval scan would hop between basins; the solver must descend
// within the basin the seed sits in.
template <typename F>
double seeded_local_min(const F& f, double seed, double step0, double lo, double hi, double tol) {
  double m = std::clamp(seed, lo, hi);
  double fm = f(m);
  double a = std::max(lo, m - step0);
  double b = std::min(hi, m + step0);
  double fa = f(a), fb = f(b);
  double step = step0;
  while (fa < fm || fb < fm) {
    step *= 2.0;
    if (fa < fb) {
      b = m;
      fb = fm;
      m = a;
      fm = fa;
      a = std::max(lo, m - step);
      if (a == m) break;
      fa = f(a);
    } else {
      a = m;
      fa = fm;
      m = b;
      fm = fb;
      b = std::min(hi, m + step);
      if (b == m) break;
      fb = f(b);
    }
  }
  return golden_section_min(f, a, b, tol);
}

// True alphabet-matched cost of the four rows touched by the rotation pair
// rooted at (p, q), evaluated after a candidate rotation with parameter x.
double rotated_pair_cost(const RealStackedBlock& data, int p, int q, double d, RotationKind kind,
                         double x) {
  const int n = data.n_streams();
  const bool cross = q >= n;
  const int pa = cross ? q - n : p + n;
  const int pb = cross ? p + n : q + n;
  const double s2 = (kind == RotationKind::hyperbolic && cross) ? -x : x;

  const double c = kind == RotationKind::givens ? std::cos(x) : std::cosh(x);
  const double s = kind == RotationKind::givens ? std::sin(x) : std::sinh(x);
  const double c2 = kind == RotationKind::givens ? std::cos(s2) : std::cosh(s2);
  const double sgn2 = kind == RotationKind::givens ? std::sin(s2) : std::sinh(s2);
  const double flip = kind == RotationKind::givens ? -1.0 : 1.0;

  double cost = 0.0;
  for (int i = 0; i < data.n_samples(); ++i) {
    const double yp = data.data(p, i), yq = data.data(q, i);
    const double ya = data.data(pa, i), yb = data.data(pb, i);
    cost += cme(c * yp + s * yq, d) + cme(flip * s * yp + c * yq, d) +
            cme(c2 * ya + sgn2 * yb, d) + cme(flip * sgn2 * ya + c2 * yb, d);
  }
  return cost;
}

RotationParams solve_ama(const RealStackedBlock& data, int p, int q, double d, RotationKind kind,
                         AmaMode mode, double bound) {
  check_rows(data, p, q);
  auto true_cost = [&](double x) { return rotated_pair_cost(data, p, q, d, kind, x); };

  std::vector<double> candidates = {0.0};
  if (mode == AmaMode::exact) {
    // The givens angle is searched within its own bound; the hyperbolic
    // parameter is searched freely and only the result is clamped.
    const double reach = kind == RotationKind::givens ? bound : 8.0;
    const double seed = kind == RotationKind::givens ? 0.0 : 1e-3;
    candidates.push_back(
        std::clamp(seeded_local_min(true_cost, seed, 1e-3, -reach, reach, 1e-6), -bound, bound));
  } else {
    const AmaPolynomial poly = build_polynomial(data, p, q, d, kind);
    const auto g = poly.gradient_coeffs();
    for (double root : detail::poly_real_roots({g[0], g[1], g[2], g[3]}))
      candidates.push_back(std::clamp(root, -bound, bound));
  }

  double best_x = 0.0;
  double best_cost = true_cost(0.0);
  for (double x : candidates) {
    const double f = true_cost(x);
    if (f < best_cost) {
      best_cost = f;
      best_x = x;
    }
  }
  if (kind == RotationKind::givens) return {std::cos(best_x), std::sin(best_x)};
  return {std::cosh(best_x), std::sinh(best_x)};
}

}  // namespace

double cme(double x, double d) {
  const double t = std::sin(x * kPi / (2.0 * d));
  return 1.0 - t * t;
}

double ama_cost(const RealStackedBlock& data, std::span<const int> rows, double d) {
  double cost = 0.0;
  for (int r : rows)
    for (int i = 0; i < data.n_samples(); ++i) cost += cme(data.data(r, i), d);
  return cost;
}

double ama_cost(const RealStackedBlock& data, double d) {
  std::vector<int> rows(static_cast<std::size_t>(2 * data.n_streams()));
  for (int r = 0; r < 2 * data.n_streams(); ++r) rows[static_cast<std::size_t>(r)] = r;
  return ama_cost(data, rows, d);
}

double AmaPolynomial::value(double x) const {
  const double d = half_spacing;
  const double d2 = d * d;
  return coeff[4] / (48.0 * d2 * d2) * x * x * x * x + coeff[3] / (12.0 * d2 * d) * x * x * x +
         coeff[2] / (4.0 * d2) * x * x + coeff[1] / (2.0 * d) * x + coeff[0] / 2.0;
}

double AmaPolynomial::gradient(double x) const {
  const auto g = gradient_coeffs();
  return ((g[3] * x + g[2]) * x + g[1]) * x + g[0];
}

std::array<double, 4> AmaPolynomial::gradient_coeffs() const {
  const double d = half_spacing;
  const double d2 = d * d;
  return {coeff[1] / (2.0 * d), coeff[2] / (2.0 * d2), coeff[3] / (4.0 * d2 * d),
          coeff[4] / (12.0 * d2 * d2)};
}

AmaPolynomial build_ama_polynomial_givens(const RealStackedBlock& data, int p, int q, double d) {
  return build_polynomial(data, p, q, d, RotationKind::givens);
}

AmaPolynomial build_ama_polynomial_hyperbolic(const RealStackedBlock& data, int p, int q, double d,
                                              HyperbolicPair pair) {
  const int n = data.n_streams();
  const bool cross = q >= n;
  if ((pair == HyperbolicPair::pair1 && cross) || (pair == HyperbolicPair::pair2 && !cross))
    throw std::invalid_argument("build_ama_polynomial_hyperbolic: pair/index mismatch");
  return build_polynomial(data, p, q, d, RotationKind::hyperbolic);
}

RotationParams solve_ama_givens(const RealStackedBlock& data, int p, int q, double d,
                                AmaMode mode) {
  return solve_ama(data, p, q, d, RotationKind::givens, mode, kPi / 4.0);
}

RotationParams solve_ama_hyperbolic(const RealStackedBlock& data, int p, int q, double d,
                                    HyperbolicPair pair, AmaMode mode) {
  const bool cross = q >= data.n_streams();
  if ((pair == HyperbolicPair::pair1 && cross) || (pair == HyperbolicPair::pair2 && !cross))
    throw std::invalid_argument("solve_ama_hyperbolic: pair/index mismatch");
  return solve_ama(data, p, q, d, RotationKind::hyperbolic, mode, 1.0);
}

}  // namespace qamsep
