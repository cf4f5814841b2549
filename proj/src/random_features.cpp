#include "rica/random_features.hpp"

#include <numbers>
#include <random>

namespace rica {

FeatureMap draw_feature_map(const KernelSpec& kernel, Index m, Index d, std::uint64_t seed) {
  if (kernel.family != KernelFamily::Gaussian) {
    throw Error(ErrorCode::UnsupportedKernel, "only the Gaussian kernel has a feature sampler");
  }
  if (m < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "need m >= 1 and d >= 1");
  if (!(kernel.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  FeatureMap map;
  map.seed = seed;
  // Standard normals scaled afterwards, so one seed gives maps for every
  // bandwidth that differ only by the factor 1/sigma.
  map.frequencies.resize(m, d);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) map.frequencies(i, j) = normal(rng);
  }
  map.frequencies /= kernel.sigma;
  map.phases.resize(m);
  for (Index i = 0; i < m; ++i) map.phases(i) = phase(rng);
  return map;
}

Matrix apply_feature_map(const FeatureMap& map, const Matrix& x) {
  if (x.rows() != map.input_dims()) {
    throw Error(ErrorCode::DimensionMismatch, "feature map input dimension differs from data");
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(map.features()));
  Matrix z = map.frequencies * x;
  z.colwise() += map.phases;
  return scale * z.array().cos().matrix();
}

Matrix apply_feature_map(const FeatureMap& map, const Dataset& data) {
  return apply_feature_map(map, data.values());
}

Matrix gram_matrix(const KernelSpec& kernel, const Dataset& data, Index limit) {
  const Index n = data.samples();
  if (n > limit) {
    throw Error(ErrorCode::OracleSizeExceeded,
                "N=" + std::to_string(n) + " exceeds oracle limit " + std::to_string(limit));
  }
  const Matrix& x = data.values();
  const Vector sq = x.colwise().squaredNorm().transpose();
  Matrix d2 = (-2.0 * x.transpose() * x).eval();
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  const double inv = -1.0 / (2.0 * kernel.sigma * kernel.sigma);
  Matrix k = (d2.array().max(0.0) * inv).exp().matrix();
  k.diagonal().setOnes();
  return 0.5 * (k + k.transpose());
}

double approximation_error_bound(Index n, Index m) {
  if (n < 2 || m < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 2 and m >= 1");
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double log_n = std::log(nn);
  return std::sqrt(3.0 * nn * nn * log_n / mm) + 2.0 * nn * log_n / mm;
}

double symmetric_operator_norm(const Matrix& a, double tol, int max_iters) {
  const Index n = a.rows();
  if (n == 0) return 0.0;
  // Fixed, dense start vector keeps the result deterministic.
  Vector v = Vector::LinSpaced(n, 1.0, 2.0).normalized();
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    // Two applications per step: converges even when ±|λ| tie in magnitude.
    Vector w = a * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    v = w / norm;
    if (std::abs(next - estimate) <= tol * std::max(1.0, next)) return next;
    estimate = next;
  }
  return estimate;
}

double empirical_approx_error(const KernelSpec& kernel, const Dataset& data, Index m,
                              std::uint64_t seed, Index limit) {
  const Matrix k = gram_matrix(kernel, data, limit);
  const FeatureMap map = draw_feature_map(kernel, m, data.dims(), seed);
  const Matrix z = apply_feature_map(map, data);
  Matrix diff = z.transpose() * z;
  diff -= k;
  return symmetric_operator_norm(diff);
}

}  // namespace rica
