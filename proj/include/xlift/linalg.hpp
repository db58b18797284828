#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "xlift/rng.hpp"

namespace xlift {

using Eigen::Dynamic;
using Eigen::RowMajor;

/// Row-major dense matrix; rows are word / document vectors throughout.
template <typename Scalar>
using RowMat = Eigen::Matrix<Scalar, Dynamic, Dynamic, RowMajor>;
template <typename Scalar>
using ColVec = Eigen::Matrix<Scalar, Dynamic, 1>;

using Mat = RowMat<double>;
using Vec = ColVec<double>;

/// max |(W^T W - I)_{ij}|, the orthogonality defect of a square map.
template <typename Scalar>
Scalar orthogonality_error(const RowMat<Scalar>& w) {
  RowMat<Scalar> g = w.transpose() * w;
  g.diagonal().array() -= Scalar(1);
  return g.cwiseAbs().maxCoeff();
}

/// Scale every row to unit Euclidean norm. Throws on a zero row, reporting
/// its index.
template <typename Scalar>
void normalize_rows_inplace(RowMat<Scalar>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Scalar n = m.row(i).norm();
    if (n == Scalar(0))
      throw std::runtime_error("normalize_rows: zero row at index " +
                               std::to_string(i));
    m.row(i) /= n;
  }
}

/// n x d matrix of independent unit vectors (Gaussian directions).
template <typename Scalar>
RowMat<Scalar> random_unit_rows(Eigen::Index n, Eigen::Index d, Rng& rng) {
  RowMat<Scalar> m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      m(i, j) = static_cast<Scalar>(rng.next_gaussian());
  normalize_rows_inplace(m);
  return m;
}

/// Random orthogonal d x d matrix: QR of a Gaussian matrix with the R
/// diagonal sign fixed, which makes the draw deterministic per seed.
template <typename Scalar>
RowMat<Scalar> random_orthogonal(Eigen::Index d, Rng& rng) {
  RowMat<Scalar> g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      g(i, j) = static_cast<Scalar>(rng.next_gaussian());
  Eigen::HouseholderQR<RowMat<Scalar>> qr(g);
  RowMat<Scalar> q = qr.householderQ();
  RowMat<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
  return q;
}

/// Orthogonal W minimizing ||W x_i - y_i|| over the paired rows of xs/ys:
/// W = U V^T from the SVD of Y^T X. xs and ys must have equal shapes with
/// at least one row.
template <typename Scalar>
RowMat<Scalar> procrustes_rotation(const RowMat<Scalar>& xs,
                                   const RowMat<Scalar>& ys) {
  if (xs.rows() == 0 || xs.rows() != ys.rows() || xs.cols() != ys.cols())
    throw std::invalid_argument("procrustes_rotation: shape mismatch");
  RowMat<Scalar> m = ys.transpose() * xs;
  Eigen::JacobiSVD<RowMat<Scalar>> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Mean of the k largest values. Selection order is pinned: values
/// descending, ties broken by ascending index, summed in that order, so two
/// independent implementations produce bit-identical results.
template <typename Scalar>
Scalar topk_mean(const std::vector<Scalar>& values, std::size_t k) {
  if (k == 0 || k > values.size())
    throw std::invalid_argument("topk_mean: k out of range");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  Scalar sum = 0;
  for (std::size_t i = 0; i < k; ++i) sum += values[order[i]];
  return sum / static_cast<Scalar>(k);
}

}  // namespace xlift
