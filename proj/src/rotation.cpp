#include "rica/rotation.hpp"

namespace rica {

RotationParams matrix_to_givens(const Matrix& rotation) {
  const Index n = rotation.rows();
  if (rotation.cols() != n) throw Error(ErrorCode::DimensionMismatch, "rotation must be square");
  Vector angles(angle_count(n));
  Matrix rest = rotation;
  Index k = 0;
  for (Index p = 0; p + 1 < n; ++p) {
    // Column p of rest (restricted to rows p..n-1) is the image of e_p under
    // G(p,p+1)...G(p,n-1); peel the planes from the innermost outwards.
    Vector col = rest.col(p);
    const Index first = k;
    const Index planes = n - 1 - p;
    Vector local(planes);
    double head = col(p);
    for (Index j = n - 1; j > p + 1; --j) {
      double tail = 0.0;
      for (Index t = p; t < j; ++t) tail += col(t) * col(t);
      tail = std::sqrt(tail);
      local(j - p - 1) = std::atan2(col(j), tail);
    }
    // Remaining 2-plane: divide out the cosines of the outer planes.
    double scale = 1.0;
    for (Index j = p + 2; j < n; ++j) scale *= std::cos(local(j - p - 1));
    if (scale > 0.0) {
      head = col(p) / scale;
      local(0) = std::atan2(col(p + 1) / scale, head);
    } else {
      local(0) = 0.0;
    }
    for (Index j = 0; j < planes; ++j) angles(first + j) = local(j);
    k += planes;

    // rest <- (G(p,p+1)...G(p,n-1))^T rest
    Matrix g = Matrix::Identity(n, n);
    for (Index j = p + 1; j < n; ++j) apply_givens_right(g, p, j, local(j - p - 1));
    rest = g.transpose() * rest;
  }
  return {angles};
}

Matrix to_special_orthogonal(Matrix q) {
  if (q.rows() > 0 && q.determinant() < 0.0) q.row(q.rows() - 1) *= -1.0;
  return q;
}

}  // namespace rica
