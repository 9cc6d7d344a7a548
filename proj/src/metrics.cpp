// SPDX-License-Identifier: Apache-2.0
#include "qamsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qamsep/errors.hpp"

namespace qamsep {

namespace {

constexpr double kSinrCapDb = 300.0;

double capped_ratio_db(double signal, double floor) {
  if (signal <= 0.0) return -kSinrCapDb;
  const double db = 10.0 * std::log10(signal / floor);
  return std::min(db, kSinrCapDb);
}

}  // namespace

GlobalSystem resolve_ambiguity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& mixing) {
  if (w.cols() != mixing.rows()) throw std::invalid_argument("resolve_ambiguity: shape mismatch");
  GlobalSystem sys;
  sys.g = w * mixing;
  const int n_out = static_cast<int>(sys.g.rows());
  const int n_src = static_cast<int>(sys.g.cols());
  if (n_out != n_src) throw std::invalid_argument("resolve_ambiguity: system must be square");

  sys.assignment.assign(static_cast<std::size_t>(n_out), -1);
  sys.gains.assign(static_cast<std::size_t>(n_out), {0.0, 0.0});
  std::vector<bool> row_used(static_cast<std::size_t>(n_out), false);
  std::vector<bool> col_used(static_cast<std::size_t>(n_src), false);

  for (int step = 0; step < n_out; ++step) {
    int bi = -1, bj = -1;
    double best = -1.0;
    for (int i = 0; i < n_out; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < n_src; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        const double mag = std::abs(sys.g(i, j));
        if (mag > best) {
          best = mag;
          bi = i;
          bj = j;
        }
      }
    }
    if (best == 0.0) throw DegenerateSeparation("resolve_ambiguity: zero matched gain");
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
    sys.assignment[static_cast<std::size_t>(bi)] = bj;
    sys.gains[static_cast<std::size_t>(bi)] = sys.g(bi, bj);
  }
  return sys;
}

double compute_sinr(const GlobalSystem& sys, const SampleBlock& sources,
                    const Eigen::MatrixXcd& w, double noise_variance) {
  const int n_out = static_cast<int>(sys.g.rows());
  const double n_samples = static_cast<double>(sources.cols());
  if (sources.rows() != sys.g.cols())
    throw std::invalid_argument("compute_sinr: source count mismatch");

  std::vector<double> source_power(static_cast<std::size_t>(sources.rows()));
  for (int k = 0; k < sources.rows(); ++k)
    source_power[static_cast<std::size_t>(k)] = sources.row(k).squaredNorm() / n_samples;

  double sum_db = 0.0;
  for (int j = 0; j < n_out; ++j) {
    const int k = sys.assignment[static_cast<std::size_t>(j)];
    const double signal =
        std::norm(sys.g(j, k)) * source_power[static_cast<std::size_t>(k)];
    double floor = noise_variance * w.row(j).squaredNorm();
    for (int l = 0; l < sys.g.cols(); ++l)
      if (l != k) floor += std::norm(sys.g(j, l)) * source_power[static_cast<std::size_t>(l)];
    sum_db += floor > 0.0 ? capped_ratio_db(signal, floor)
                          : (signal > 0.0 ? kSinrCapDb : -kSinrCapDb);
  }
  return sum_db / n_out;
}

double demap_and_ser(const GlobalSystem& sys, const SampleBlock& separated,
                     const SampleBlock& sources, const ConstellationSpec& spec) {
  const int n_out = static_cast<int>(separated.rows());
  const int n_samples = static_cast<int>(separated.cols());
  if (sources.cols() != n_samples || sys.g.rows() != n_out)
    throw std::invalid_argument("demap_and_ser: shape mismatch");

  long errors = 0;
  for (int j = 0; j < n_out; ++j) {
    const int k = sys.assignment[static_cast<std::size_t>(j)];
    const std::complex<double> gain = sys.gains[static_cast<std::size_t>(j)];
    for (int i = 0; i < n_samples; ++i) {
      const std::complex<double> hat = nearest_point(spec, separated(j, i) / gain);
      const std::complex<double> ref = nearest_point(spec, sources(k, i));
      if (hat != ref) ++errors;
    }
  }
  return static_cast<double>(errors) / (static_cast<double>(n_out) * n_samples);
}

double interference_db(const GlobalSystem& sys) {
  double matched = 0.0, rest = 0.0;
  for (int j = 0; j < sys.g.rows(); ++j) {
    const int k = sys.assignment[static_cast<std::size_t>(j)];
    for (int l = 0; l < sys.g.cols(); ++l)
      (l == k ? matched : rest) += std::norm(sys.g(j, l));
  }
  return rest > 0.0 ? 10.0 * std::log10(rest / matched) : -kSinrCapDb;
}

}  // namespace qamsep
