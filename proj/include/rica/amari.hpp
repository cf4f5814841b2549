#pragma once

#include <cmath>

#include "rica/core.hpp"

namespace rica {

/// Amari distance between unmixing estimates V and W, computed on
/// a = V W^{-1}. Zero exactly when a is a scaled permutation; at most n - 1.
/// Throws SingularMatrix if W is not invertible.
template <typename DerivedV, typename DerivedW>
double amari_distance(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedV::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = w.rows();
  if (w.cols() != n || v.rows() != n || v.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "amari distance needs two n×n matrices");
  }
  Eigen::FullPivLU<Dense> lu(w.template cast<Scalar>());
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "W is not invertible");
  const Dense a = (v * lu.inverse()).cwiseAbs();

  Scalar rows = 0;
  for (Index i = 0; i < n; ++i) rows += a.row(i).sum() / a.row(i).maxCoeff() - Scalar(1);
  Scalar cols = 0;
  for (Index j = 0; j < n; ++j) cols += a.col(j).sum() / a.col(j).maxCoeff() - Scalar(1);
  return static_cast<double>((rows + cols) / (Scalar(2) * Scalar(n)));
}

}  // namespace rica
