// SPDX-License-Identifier: Apache-2.0
#include "qamsep/rotations.hpp"

#include <cmath>
#include <stdexcept>

namespace qamsep {

namespace {

template <typename Matrix>
void rotate_rows(Matrix& m, const PlaneRotation& r) {
  const Eigen::RowVectorXd rp = m.row(r.p);
  const Eigen::RowVectorXd rq = m.row(r.q);
  if (r.kind == RotationKind::givens) {
    m.row(r.p) = r.c * rp + r.s * rq;
    m.row(r.q) = -r.s * rp + r.c * rq;
  } else {
    m.row(r.p) = r.c * rp + r.s * rq;
    m.row(r.q) = r.s * rp + r.c * rq;
  }
}

bool params_unit(const PlaneRotation& r) {
  const double form = r.kind == RotationKind::givens ? r.c * r.c + r.s * r.s
                                                     : r.c * r.c - r.s * r.s;
  return std::abs(form - 1.0) <= 1e-9;
}

}  // namespace

RealStackedBlock stack(const SampleBlock& block) {
  const int n = static_cast<int>(block.rows());
  RealStackedBlock out;
  out.data.resize(2 * n, block.cols());
  out.data.topRows(n) = block.real();
  out.data.bottomRows(n) = block.imag();
  return out;
}

SampleBlock unstack(const RealStackedBlock& block) {
  const int n = block.n_streams();
  SampleBlock out(n, block.n_samples());
  out.real() = block.data.topRows(n);
  out.imag() = block.data.bottomRows(n);
  return out;
}

StructuredSeparator StructuredSeparator::identity(int n_streams) {
  StructuredSeparator s;
  s.m = Eigen::MatrixXd::Identity(2 * n_streams, 2 * n_streams);
  return s;
}

double StructuredSeparator::structure_residual() const {
  const int n = n_streams();
  const double denom = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double d1 = (m.topLeftCorner(n, n) - m.bottomRightCorner(n, n)).cwiseAbs().maxCoeff();
  const double d2 = (m.topRightCorner(n, n) + m.bottomLeftCorner(n, n)).cwiseAbs().maxCoeff();
  return std::max(d1, d2) / denom;
}

void StructuredSeparator::resymmetrize() {
  const int n = n_streams();
  const Eigen::MatrixXd vr = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  const Eigen::MatrixXd vi = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  m.topLeftCorner(n, n) = vr;
  m.bottomRightCorner(n, n) = vr;
  m.bottomLeftCorner(n, n) = vi;
  m.topRightCorner(n, n) = -vi;
}

Eigen::MatrixXcd StructuredSeparator::to_complex() const {
  const int n = n_streams();
  Eigen::MatrixXcd v(n, n);
  v.real() = m.topLeftCorner(n, n);
  v.imag() = m.bottomLeftCorner(n, n);
  return v;
}

std::pair<PlaneRotation, PlaneRotation> make_pair_rotations(RotationKind kind, PairPattern pattern,
                                                            int n_streams, int p, int q, double c,
                                                            double s) {
  const int n = n_streams;
  switch (pattern) {
    case PairPattern::direct:
      return {{kind, p, q, c, s}, {kind, p + n, q + n, c, s}};
    case PairPattern::cross:
      return {{kind, p, q + n, c, s},
              {kind, q, p + n, c, kind == RotationKind::hyperbolic ? -s : s}};
    case PairPattern::diagonal:
      return {{kind, p, p + n, c, s}, {kind, p, p + n, c, s}};
  }
  throw std::invalid_argument("make_pair_rotations: bad pattern");
}

void apply_rotation_pair(RealStackedBlock& data, StructuredSeparator& separator,
                         const PlaneRotation& a, const PlaneRotation& b) {
  const int n = data.n_streams();
  const int rows = 2 * n;
  if (separator.n_streams() != n)
    throw std::invalid_argument("apply_rotation_pair: data/separator size mismatch");
  if (a.kind != b.kind || a.kind == RotationKind::normalization)
    throw std::invalid_argument("apply_rotation_pair: kinds must match and be rotational");
  if (a.p < 0 || a.q < 0 || b.p < 0 || b.q < 0 || a.p >= rows || a.q >= rows || b.p >= rows ||
      b.q >= rows)
    throw std::invalid_argument("apply_rotation_pair: row index out of range");
  if (!params_unit(a) || !params_unit(b))
    throw std::invalid_argument("apply_rotation_pair: parameters violate the rotation form");

  const bool diagonal = a.kind == RotationKind::givens && a.p == b.p && a.q == b.q &&
                        a.p < n && a.q == a.p + n && a.c == b.c && a.s == b.s;
  const bool direct = a.p < n && a.q < n && a.p < a.q && b.p == a.p + n && b.q == a.q + n &&
                      a.c == b.c && a.s == b.s;
  const bool cross = a.p < n && a.q >= n && a.q - n != a.p && b.p == a.q - n && b.q == a.p + n &&
                     a.c == b.c &&
                     (a.kind == RotationKind::hyperbolic ? b.s == -a.s : b.s == a.s);
  if (!diagonal && !direct && !cross)
    throw std::invalid_argument("apply_rotation_pair: rotations do not form a valid pattern");

  rotate_rows(data.data, a);
  rotate_rows(separator.m, a);
  if (!diagonal) {
    rotate_rows(data.data, b);
    rotate_rows(separator.m, b);
  }
}

void apply_normalization(RealStackedBlock& data, StructuredSeparator& separator,
                         const std::vector<double>& lambdas) {
  const int n = data.n_streams();
  if (static_cast<int>(lambdas.size()) != n)
    throw std::invalid_argument("apply_normalization: one factor per stream required");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("apply_normalization: factors must be positive and finite");

  for (int p = 0; p < n; ++p) {
    data.data.row(p) *= lambdas[p];
    data.data.row(p + n) *= lambdas[p];
    separator.m.row(p) *= lambdas[p];
    separator.m.row(p + n) *= lambdas[p];
  }
}

}  // namespace qamsep
