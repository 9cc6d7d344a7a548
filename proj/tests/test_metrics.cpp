// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qamsep/errors.hpp"
#include "qamsep/metrics.hpp"
#include "qamsep/rng.hpp"

using namespace qamsep;

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

// Best permutation by total matched magnitude, brute force.
std::vector<int> best_permutation(const Eigen::MatrixXcd& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<int> perm(n), best(n);
  std::iota(perm.begin(), perm.end(), 0);
  best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (int i = 0; i < n; ++i) score += std::abs(g(i, perm[i]));
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("ambiguity resolution recovers permutation and gain") {
  // W = diag(2, 3i) under a swap; mixing = identity so G = W.
  Eigen::MatrixXcd w(2, 2);
  w << 0.0, 2.0, 3.0 * kI, 0.0;
  const auto sys = resolve_ambiguity(w, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(sys.assignment[0] == 1);
  CHECK(sys.assignment[1] == 0);
  CHECK(std::abs(sys.gains[0] - 2.0) < 1e-15);
  CHECK(std::abs(sys.gains[1] - 3.0 * kI) < 1e-15);
  CHECK(sys.g == w);
}

TEST_CASE("greedy matching agrees with brute force on dominant systems") {
  // Near-diagonal systems (the post-separation case): one dominant entry per
  // row/column, where greedy matching is exact.
  std::mt19937_64 eng = make_engine(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::uniform_real_distribution<double> gain(0.7, 1.8);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(eng() % 4);  // up to 5
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), eng);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(noise(eng), noise(eng));
    for (int i = 0; i < n; ++i) g(i, perm[i]) += gain(eng) * std::exp(kI * noise(eng));

    const auto sys = resolve_ambiguity(g, Eigen::MatrixXcd::Identity(n, n));
    const auto ref = best_permutation(g);
    for (int i = 0; i < n; ++i) {
      CHECK(sys.assignment[i] == ref[i]);
      CHECK(std::abs(sys.gains[i] - g(i, ref[i])) < 1e-15);
    }
  }
}

TEST_CASE("zero separators are degenerate") {
  const Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(3, 3);
  CHECK_THROWS_AS(resolve_ambiguity(w, Eigen::MatrixXcd::Identity(3, 3)), DegenerateSeparation);
  CHECK_THROWS_AS(resolve_ambiguity(Eigen::MatrixXcd::Identity(3, 3),
                                    Eigen::MatrixXcd::Identity(4, 4)),
                  std::invalid_argument);
  // Wide W x tall mixing -> non-square global system.
  CHECK_THROWS_AS(resolve_ambiguity(Eigen::MatrixXcd::Identity(2, 4).eval(),
                                    Eigen::MatrixXcd::Ones(4, 3).eval()),
                  std::invalid_argument);
}

TEST_CASE("perfect separation hits the sinr cap") {
  const auto spec = build_constellation(16);
  const SampleBlock s = draw_sources(spec, 2, 100, 11);
  const Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(2, 2);
  const auto sys = resolve_ambiguity(w, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(compute_sinr(sys, s, w, 0.0) == doctest::Approx(300.0));
  CHECK(interference_db(sys) == doctest::Approx(-300.0));  // zero leakage reports the cap
}

TEST_CASE("sinr matches the closed form on a frozen 2x2 system") {
  const auto spec = build_constellation(16);
  const SampleBlock s = draw_sources(spec, 2, 500, 21);
  Eigen::MatrixXcd g(2, 2);
  g << 1.0, 0.1, 0.05 * kI, 1.0;
  // Treat g itself as W with identity mixing; noise variance 0.01.
  const auto sys = resolve_ambiguity(g, Eigen::MatrixXcd::Identity(2, 2));
  const double nv = 0.01;
  const double p0 = s.row(0).squaredNorm();
  const double p1 = s.row(1).squaredNorm();
  const double n = static_cast<double>(s.cols());

  const double sinr0 = p0 / (0.01 * p1 + n * nv * g.row(0).squaredNorm());
  const double sinr1 = p1 / (0.0025 * p0 + n * nv * g.row(1).squaredNorm());
  const double expect = 5.0 * (std::log10(sinr0) + std::log10(sinr1));  // dB mean
  CHECK(compute_sinr(sys, s, g, nv) == doctest::Approx(expect).epsilon(1e-12));

  // Row scaling leaves the metric unchanged (numerator, interference and noise
  // all pick up the same |alpha|^2).
  Eigen::MatrixXcd scaled = g;
  scaled.row(0) *= std::complex<double>(2.0, -1.0);
  const auto sys2 = resolve_ambiguity(scaled, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(compute_sinr(sys2, s, scaled, nv) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("interference ratio on a frozen system") {
  Eigen::MatrixXcd g(2, 2);
  g << 1.0, 0.1, 0.01, 1.0;
  const auto sys = resolve_ambiguity(g, Eigen::MatrixXcd::Identity(2, 2));
  // Leakage (0.1^2 + 0.01^2) against matched power 2.
  const double expect = 10.0 * std::log10((0.01 + 0.0001) / 2.0);
  CHECK(interference_db(sys) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("ser is zero whenever the matched gain is undone exactly") {
  const auto spec = build_constellation(64);
  const SampleBlock s = draw_sources(spec, 3, 400, 31);

  for (const std::complex<double> alpha :
       {std::complex<double>(1, 0), std::complex<double>(-1, 0),
        std::exp(kI * (M_PI / 4.0)), std::complex<double>(0.0, 2.0)}) {
    Eigen::MatrixXcd w = alpha * Eigen::MatrixXcd::Identity(3, 3);
    const auto sys = resolve_ambiguity(w, Eigen::MatrixXcd::Identity(3, 3));
    const SampleBlock separated = w * s;
    CHECK(demap_and_ser(sys, separated, s, spec) == 0.0);
  }

  // A permuted separator also demaps cleanly after resolution.
  Eigen::MatrixXcd p(3, 3);
  p << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const auto sys = resolve_ambiguity(p, Eigen::MatrixXcd::Identity(3, 3));
  CHECK(demap_and_ser(sys, p * s, s, spec) == 0.0);
}

TEST_CASE("ser counts a known fraction of corrupted symbols") {
  const auto spec = build_constellation(16);
  SampleBlock s = draw_sources(spec, 1, 200, 41);
  SampleBlock z = s;
  // Corrupt 10 symbols beyond the decision boundary (half spacing per axis).
  for (int j = 0; j < 10; ++j) z(0, j) += 1.4 * spec.half_spacing;
  const Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(1, 1);
  const auto sys = resolve_ambiguity(w, Eigen::MatrixXcd::Identity(1, 1));
  const double ser = demap_and_ser(sys, z, s, spec);
  // Displacing by 1.4 half-spacings flips the axis decision except at the
  // clamped outer level (real part at +3c stays +3c). Count the survivors.
  int expect = 0;
  for (int j = 0; j < 10; ++j)
    if (nearest_point(spec, z(0, j)) != nearest_point(spec, s(0, j))) ++expect;
  CHECK(expect > 0);
  CHECK(ser == doctest::Approx(static_cast<double>(expect) / 200.0).epsilon(1e-12));
}

TEST_CASE("garbage outputs give a high symbol error rate") {
  const auto spec = build_constellation(16);
  const SampleBlock s = draw_sources(spec, 2, 500, 51);
  std::mt19937_64 eng = make_engine(52);
  std::normal_distribution<double> g(0.0, 1.0);
  SampleBlock z(2, 500);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 500; ++j) z(i, j) = std::complex<double>(g(eng), g(eng));
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(2, 2);
  const auto sys = resolve_ambiguity(w, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(demap_and_ser(sys, z, s, spec) > 0.5);
}
