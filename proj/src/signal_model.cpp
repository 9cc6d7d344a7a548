// SPDX-License-Identifier: Apache-2.0
#include "qamsep/signal_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qamsep/errors.hpp"
#include "qamsep/rng.hpp"

namespace qamsep {

namespace {

constexpr int kMaxChannelDraws = 1000;

// Standard complex Gaussian: real/imag each N(0, 1/2) so E|x|^2 = 1.
std::complex<double> randcn(std::mt19937_64& eng, std::normal_distribution<double>& n) {
  const double re = n(eng);
  const double im = n(eng);
  return {re, im};
}

}  // namespace

SampleBlock draw_sources(const ConstellationSpec& spec, int n_sources, int n_samples,
                         std::uint64_t seed) {
  if (n_sources <= 0 || n_samples <= 0)
    throw std::invalid_argument("draw_sources: dimensions must be positive");

  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.order))));
  const std::uint64_t mask = static_cast<std::uint64_t>(spec.order) - 1;  // order is a power of two
  auto eng = make_engine(seed);

  SampleBlock s(n_sources, n_samples);
  for (int j = 0; j < n_sources; ++j)
    for (int i = 0; i < n_samples; ++i) {
      const auto idx = static_cast<int>(eng() & mask);
      const int a = idx % m;
      const int b = idx / m;
      s(j, i) = {spec.scale * (2 * a - (m - 1)), spec.scale * (2 * b - (m - 1))};
    }
  return s;
}

ChannelInstance draw_channel(int n_rx, int n_tx, double condition_bound, std::uint64_t seed) {
  if (n_rx <= 0 || n_tx <= 0 || n_rx < n_tx)
    throw std::invalid_argument("draw_channel: need n_rx >= n_tx > 0");
  if (!(condition_bound >= 1.0))
    throw std::invalid_argument("draw_channel: condition_bound must be >= 1");

  auto eng = make_engine(seed);
  std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));

  for (int attempt = 0; attempt < kMaxChannelDraws; ++attempt) {
    Eigen::MatrixXcd a(n_rx, n_tx);
    for (int r = 0; r < n_rx; ++r)
      for (int c = 0; c < n_tx; ++c) a(r, c) = randcn(eng, n);

    if (!std::isfinite(condition_bound)) return {a, 0.0, condition_bound};

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double smin = svd.singularValues()(n_tx - 1);
    if (smin > 0.0 && svd.singularValues()(0) / smin <= condition_bound)
      return {a, 0.0, condition_bound};
  }
  throw GenerationFailure("draw_channel: no draw met the condition bound within 1000 attempts");
}

SampleBlock transmit(ChannelInstance& channel, const SampleBlock& sources, double snr_db,
                     std::uint64_t seed) {
  if (channel.mixing.cols() != sources.rows())
    throw std::invalid_argument("transmit: channel/source dimension mismatch");

  SampleBlock y = channel.mixing * sources;
  if (snr_db == std::numeric_limits<double>::infinity()) {
    channel.noise_variance = 0.0;
    return y;
  }

  const double n_rx = static_cast<double>(y.rows());
  const double n_samples = static_cast<double>(y.cols());
  const double signal_power = y.squaredNorm() / (n_samples * n_rx);
  const double sigma2 = signal_power / std::pow(10.0, snr_db / 10.0);
  channel.noise_variance = sigma2;

  auto eng = make_engine(seed);
  std::normal_distribution<double> n(0.0, std::sqrt(sigma2 / 2.0));
  for (int c = 0; c < y.cols(); ++c)
    for (int r = 0; r < y.rows(); ++r) y(r, c) += randcn(eng, n);
  return y;
}

}  // namespace qamsep
