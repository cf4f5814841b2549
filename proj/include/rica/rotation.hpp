#pragma once

#include <cmath>

#include "rica/core.hpp"

namespace rica {

/// Givens angles for SO(n), one per plane (i, j), i < j, in lexicographic order.
struct RotationParams {
  Vector angles;
};

constexpr Index angle_count(Index n) { return n * (n - 1) / 2; }

/// Right-multiplies `q` in place by the plane rotation G(i, j, theta).
template <typename Derived>
void apply_givens_right(Eigen::MatrixBase<Derived>& q, Index i, Index j,
                        typename Derived::Scalar theta) {
  using std::cos;
  using std::sin;
  const auto c = cos(theta);
  const auto s = sin(theta);
  for (Index r = 0; r < q.rows(); ++r) {
    const auto a = q(r, i);
    const auto b = q(r, j);
    q(r, i) = c * a + s * b;
    q(r, j) = -s * a + c * b;
  }
}

/// Q = G(0,1) G(0,2) ... G(n-2,n-1). For n = 2, angle pi/2 gives [[0,-1],[1,0]].
template <typename Scalar = double, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> givens_to_matrix(
    const Eigen::MatrixBase<Derived>& angles, Index n) {
  if (angles.size() != angle_count(n)) {
    throw Error(ErrorCode::AngleCountMismatch,
                "expected " + std::to_string(angle_count(n)) + " angles, got " +
                    std::to_string(angles.size()));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) apply_givens_right(q, i, j, Scalar(angles(k++)));
  }
  return q;
}

inline Matrix givens_to_matrix(const RotationParams& params, Index n) {
  return givens_to_matrix<double>(params.angles, n);
}

/// Inverse of givens_to_matrix for a rotation (det +1). Angles of planes
/// (0, j>1) land in [-pi/2, pi/2]; plane (0, 1) in (-pi, pi].
RotationParams matrix_to_givens(const Matrix& rotation);

/// Flips the sign of the last row when det < 0, returning a rotation that
/// unmixes the same components up to sign.
Matrix to_special_orthogonal(Matrix q);

}  // namespace rica
