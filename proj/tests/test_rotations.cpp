// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "qamsep/rng.hpp"
#include "qamsep/rotations.hpp"

using namespace qamsep;

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

SampleBlock random_block(int n, int cols, std::uint64_t seed) {
  std::mt19937_64 eng = make_engine(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  SampleBlock b(n, cols);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = std::complex<double>(dist(eng), dist(eng));
  return b;
}

struct Applied {
  RealStackedBlock data;
  StructuredSeparator sep;
};

Applied apply(const SampleBlock& y, RotationKind kind, PairPattern pattern, int p, int q, double c,
              double s) {
  Applied out{stack(y), StructuredSeparator::identity(static_cast<int>(y.rows()))};
  const auto [a, b] =
      make_pair_rotations(kind, pattern, static_cast<int>(y.rows()), p, q, c, s);
  apply_rotation_pair(out.data, out.sep, a, b);
  return out;
}

}  // namespace

TEST_CASE("stack/unstack roundtrip is exact") {
  const SampleBlock y = random_block(4, 33, 1);
  const RealStackedBlock r = stack(y);
  REQUIRE(r.n_streams() == 4);
  REQUIRE(r.n_samples() == 33);
  CHECK(r.data.row(2) == y.row(2).real());
  CHECK(r.data.row(6) == y.row(2).imag());
  CHECK(unstack(r) == y);
}

TEST_CASE("zero-angle rotations are no-ops") {
  const SampleBlock y = random_block(3, 20, 2);
  for (auto pattern : {PairPattern::direct, PairPattern::cross}) {
    const auto g = apply(y, RotationKind::givens, pattern, 0, 2, 1.0, 0.0);
    CHECK(unstack(g.data) == y);
    CHECK(g.sep.m == Eigen::MatrixXd::Identity(6, 6));
    const auto h = apply(y, RotationKind::hyperbolic, pattern, 0, 2, 1.0, 0.0);
    CHECK(unstack(h.data) == y);
  }
}

TEST_CASE("direct givens pair equals the zero-phase complex rotation") {
  const SampleBlock y = random_block(4, 50, 3);
  const double th = 0.37;
  const auto r = apply(y, RotationKind::givens, PairPattern::direct, 1, 3, std::cos(th), std::sin(th));
  const SampleBlock z = unstack(r.data);
  for (int j = 0; j < y.cols(); ++j) {
    CHECK(std::abs(z(1, j) - (std::cos(th) * y(1, j) + std::sin(th) * y(3, j))) < 1e-12);
    CHECK(std::abs(z(3, j) - (-std::sin(th) * y(1, j) + std::cos(th) * y(3, j))) < 1e-12);
    CHECK(std::abs(z(0, j) - y(0, j)) == 0.0);
    CHECK(std::abs(z(2, j) - y(2, j)) == 0.0);
  }
  // The separator tracks the same map.
  CHECK((r.sep.to_complex() * y - z).norm() < 1e-12);
}

TEST_CASE("cross givens pair equals the -pi/2 phase complex rotation") {
  const SampleBlock y = random_block(3, 40, 4);
  const double th = -0.22;
  const double c = std::cos(th), s = std::sin(th);
  // Cross pair rooted at streams (0, 2): raw rows (0, 2+3) and (2, 0+3).
  const auto r = apply(y, RotationKind::givens, PairPattern::cross, 0, 2, c, s);
  const SampleBlock z = unstack(r.data);
  for (int j = 0; j < y.cols(); ++j) {
    CHECK(std::abs(z(0, j) - (c * y(0, j) - kI * s * y(2, j))) < 1e-12);
    CHECK(std::abs(z(2, j) - (-kI * s * y(0, j) + c * y(2, j))) < 1e-12);
    CHECK(std::abs(z(1, j) - y(1, j)) == 0.0);
  }
  CHECK((r.sep.to_complex() * y - z).norm() < 1e-12);
}

TEST_CASE("direct hyperbolic pair equals the zero-phase complex expansion") {
  const SampleBlock y = random_block(3, 40, 5);
  const double g = 0.31;
  const double c = std::cosh(g), s = std::sinh(g);
  const auto r = apply(y, RotationKind::hyperbolic, PairPattern::direct, 0, 1, c, s);
  const SampleBlock z = unstack(r.data);
  for (int j = 0; j < y.cols(); ++j) {
    CHECK(std::abs(z(0, j) - (c * y(0, j) + s * y(1, j))) < 1e-12);
    CHECK(std::abs(z(1, j) - (s * y(0, j) + c * y(1, j))) < 1e-12);
  }
  CHECK((r.sep.to_complex() * y - z).norm() < 1e-12);
}

TEST_CASE("cross hyperbolic pair equals the -pi/2 phase complex expansion") {
  const SampleBlock y = random_block(3, 40, 6);
  const double g = 0.27;
  const double c = std::cosh(g), s = std::sinh(g);
  const auto r = apply(y, RotationKind::hyperbolic, PairPattern::cross, 1, 2, c, s);
  const SampleBlock z = unstack(r.data);
  for (int j = 0; j < y.cols(); ++j) {
    CHECK(std::abs(z(1, j) - (c * y(1, j) - kI * s * y(2, j))) < 1e-12);
    CHECK(std::abs(z(2, j) - (kI * s * y(1, j) + c * y(2, j))) < 1e-12);
    CHECK(std::abs(z(0, j) - y(0, j)) == 0.0);
  }
  CHECK((r.sep.to_complex() * y - z).norm() < 1e-12);
}

TEST_CASE("diagonal givens is a per-stream phase derotation") {
  const SampleBlock y = random_block(3, 30, 7);
  const double th = 0.53;
  const auto r = apply(y, RotationKind::givens, PairPattern::diagonal, 1, 1, std::cos(th), std::sin(th));
  const SampleBlock z = unstack(r.data);
  for (int j = 0; j < y.cols(); ++j) {
    CHECK(std::abs(z(1, j) - std::exp(-kI * th) * y(1, j)) < 1e-12);
    CHECK(std::abs(z(0, j) - y(0, j)) == 0.0);
    CHECK(std::abs(z(2, j) - y(2, j)) == 0.0);
  }
}

TEST_CASE("rotation chains keep the separator structure exactly") {
  const SampleBlock y = random_block(4, 60, 8);
  RealStackedBlock d = stack(y);
  StructuredSeparator sep = StructuredSeparator::identity(4);
  std::mt19937_64 eng = make_engine(9);
  std::uniform_real_distribution<double> ang(-0.5, 0.5);

  for (int it = 0; it < 200; ++it) {
    const int p = static_cast<int>(eng() % 3);
    const int q = p + 1 + static_cast<int>(eng() % (3 - p));
    const bool hyper = (eng() & 1) != 0;
    const bool crossed = (eng() & 2) != 0;
    const double x = ang(eng) * (hyper ? 0.3 : 1.0);
    const auto kind = hyper ? RotationKind::hyperbolic : RotationKind::givens;
    const auto pattern = crossed ? PairPattern::cross : PairPattern::direct;
    const double c = hyper ? std::cosh(x) : std::cos(x);
    const double s = hyper ? std::sinh(x) : std::sin(x);
    const auto [a, b] = make_pair_rotations(kind, pattern, 4, p, q, c, s);
    apply_rotation_pair(d, sep, a, b);
  }
  CHECK(sep.structure_residual() == 0.0);
  // The separator applied to the original block reproduces the rotated one.
  CHECK((sep.m * stack(y).data - d.data).norm() < 1e-9 * d.data.norm());
}

TEST_CASE("givens pairs preserve energy, hyperbolic pairs the J-form") {
  const SampleBlock y = random_block(3, 50, 10);
  const auto g = apply(y, RotationKind::givens, PairPattern::cross, 0, 1, std::cos(0.4), std::sin(0.4));
  CHECK(g.data.data.squaredNorm() == doctest::Approx(stack(y).data.squaredNorm()).epsilon(1e-12));

  const double c = std::cosh(0.35), s = std::sinh(0.35);
  const auto h = apply(y, RotationKind::hyperbolic, PairPattern::direct, 0, 1, c, s);
  const RealStackedBlock base = stack(y);
  // Per row pair (p, q): sum(y_p^2 - y_q^2) is invariant under [ch sh; sh ch].
  const auto jform = [](const RealStackedBlock& b, int p, int q) {
    return b.data.row(p).squaredNorm() - b.data.row(q).squaredNorm();
  };
  CHECK(jform(h.data, 0, 1) == doctest::Approx(jform(base, 0, 1)).epsilon(1e-10));
  CHECK(jform(h.data, 3, 4) == doctest::Approx(jform(base, 3, 4)).epsilon(1e-10));
}

TEST_CASE("structure residual flags asymmetry and resymmetrize removes it") {
  StructuredSeparator sep = StructuredSeparator::identity(3);
  CHECK(sep.structure_residual() == 0.0);
  sep.m(0, 1) = 1e-3;  // breaks the V_R mirror
  CHECK(sep.structure_residual() > 0.0);
  sep.resymmetrize();
  CHECK(sep.structure_residual() == 0.0);
  CHECK(sep.m(0, 1) == doctest::Approx(5e-4));
  CHECK(sep.m(3, 4) == doctest::Approx(5e-4));
}

TEST_CASE("to_complex extracts the stacked blocks") {
  StructuredSeparator sep = StructuredSeparator::identity(2);
  sep.m << 1, 2, -3, -4, 5, 6, 7, 8, 3, 4, 1, 2, -5, -6, 5, 6;
  // m = [[V_R, -V_I], [V_I, V_R]] with V_R = [1 2; 5 6], V_I = [3 4; -5 -6].
  const Eigen::MatrixXcd v = sep.to_complex();
  CHECK(v(0, 0) == std::complex<double>(1, 3));
  CHECK(v(0, 1) == std::complex<double>(2, 4));
  CHECK(v(1, 0) == std::complex<double>(5, -5));
  CHECK(v(1, 1) == std::complex<double>(6, -6));
}

TEST_CASE("invalid rotation pairs are rejected") {
  RealStackedBlock d = stack(random_block(3, 10, 11));
  StructuredSeparator sep = StructuredSeparator::identity(3);
  const double c = std::cos(0.2), s = std::sin(0.2);

  const auto [a, b] = make_pair_rotations(RotationKind::givens, PairPattern::direct, 3, 0, 1, c, s);
  // Mismatched kinds.
  PlaneRotation bad = b;
  bad.kind = RotationKind::hyperbolic;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, a, bad), std::invalid_argument);
  // Normalization cannot go through the pair interface.
  bad = b;
  bad.kind = RotationKind::normalization;
  PlaneRotation an = a;
  an.kind = RotationKind::normalization;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, an, bad), std::invalid_argument);
  // Non-unit parameters.
  bad = b;
  bad.c = 1.1;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, a, bad), std::invalid_argument);
  // Rows that are not a structure-preserving pattern.
  bad = b;
  bad.p = 0;
  bad.q = 5;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, a, bad), std::invalid_argument);
  // Out-of-range indices.
  bad = b;
  bad.q = 7;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, a, bad), std::invalid_argument);
  // Hyperbolic parameters on a givens kind.
  PlaneRotation ha = a, hb = b;
  ha.c = std::cosh(0.2);
  ha.s = std::sinh(0.2);
  hb.c = ha.c;
  hb.s = ha.s;
  CHECK_THROWS_AS(apply_rotation_pair(d, sep, ha, hb), std::invalid_argument);
}

TEST_CASE("normalization scales paired rows and validates factors") {
  const SampleBlock y = random_block(3, 25, 12);
  RealStackedBlock d = stack(y);
  StructuredSeparator sep = StructuredSeparator::identity(3);
  apply_normalization(d, sep, {2.0, 1.0, 0.5});
  const SampleBlock z = unstack(d);
  CHECK((z.row(0) - 2.0 * y.row(0)).norm() == 0.0);
  CHECK((z.row(1) - y.row(1)).norm() == 0.0);
  CHECK((z.row(2) - 0.5 * y.row(2)).norm() == 0.0);
  CHECK(sep.m(0, 0) == 2.0);
  CHECK(sep.m(3, 3) == 2.0);
  CHECK(sep.structure_residual() == 0.0);

  CHECK_THROWS_AS(apply_normalization(d, sep, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(apply_normalization(d, sep, {1.0, -1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(apply_normalization(d, sep, {1.0, 0.0, 1.0}), std::invalid_argument);
}
