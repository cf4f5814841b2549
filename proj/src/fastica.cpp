#include "rica/fastica.hpp"

#include <cmath>
#include <random>

namespace rica {

namespace {

Matrix symmetric_orthonormalize(const Matrix& w) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w * w.transpose());
  const Matrix& u = eig.eigenvectors();
  const Vector inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return u * inv_sqrt.asDiagonal() * u.transpose() * w;
}

}  // namespace

FastIcaResult fastica_baseline(const Dataset& whitened, std::uint64_t seed, double tol,
                               int max_sweeps) {
  const Matrix& x = whitened.values();
  const Index n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(x.cols());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  FastIcaResult result;
  result.converged = true;
  Matrix w_all = Matrix::Zero(n, n);

  for (Index p = 0; p < n; ++p) {
    Vector w(n);
    for (Index i = 0; i < n; ++i) w(i) = normal(rng);
    w -= w_all.topRows(p).transpose() * (w_all.topRows(p) * w);
    w.normalize();

    bool unit_converged = false;
    for (int it = 0; it < max_sweeps; ++it) {
      ++result.sweeps;
      const Eigen::ArrayXd g = (w.transpose() * x).array().tanh().transpose();
      const double mean_dg = (1.0 - g.square()).mean();
      Vector next = (x * g.matrix()) * inv_n - mean_dg * w;
      next -= w_all.topRows(p).transpose() * (w_all.topRows(p) * next);
      const double norm = next.norm();
      if (!(norm > 0.0)) break;
      next /= norm;
      const double change = std::abs(1.0 - std::abs(next.dot(w)));
      w = next;
      if (change < tol) {
        unit_converged = true;
        break;
      }
    }
    result.converged = result.converged && unit_converged;
    w_all.row(p) = w.transpose();
  }

  result.rotation = symmetric_orthonormalize(w_all);
  return result;
}

}  // namespace rica
