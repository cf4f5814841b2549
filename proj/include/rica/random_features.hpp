#pragma once

#include <cmath>
#include <cstdint>

#include "rica/core.hpp"
#include "rica/data_model.hpp"

namespace rica {

enum class KernelFamily { Gaussian, Laplacian };

/// Shift-invariant kernel k(x, y) = exp(-|x - y|^2 / (2 sigma^2)).
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double sigma = 1.0;

  template <typename DerivedA, typename DerivedB>
  double operator()(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) const {
    return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
  }
};

/// m random cosine features z(x) = sqrt(2/m) cos(W x + b) for d-dimensional x.
struct FeatureMap {
  Matrix frequencies;  // m×d, rows drawn from the kernel's spectral density
  Vector phases;       // m, uniform on [0, 2π)
  std::uint64_t seed = 0;

  Index features() const noexcept { return frequencies.rows(); }
  Index input_dims() const noexcept { return frequencies.cols(); }
};

inline constexpr Index kDefaultGramLimit = 4000;

/// Throws UnsupportedKernel for non-Gaussian families.
FeatureMap draw_feature_map(const KernelSpec& kernel, Index m, Index d, std::uint64_t seed);

/// m×N feature matrix; column k is z(x^k).
Matrix apply_feature_map(const FeatureMap& map, const Matrix& x);
Matrix apply_feature_map(const FeatureMap& map, const Dataset& data);

/// Exact N×N kernel matrix. Throws OracleSizeExceeded above `limit` samples.
Matrix gram_matrix(const KernelSpec& kernel, const Dataset& data, Index limit = kDefaultGramLimit);

/// sqrt(3 n^2 log n / m) + 2 n log n / m.
double approximation_error_bound(Index n, Index m);

/// Largest |eigenvalue| of a symmetric matrix by power iteration.
double symmetric_operator_norm(const Matrix& a, double tol = 1e-6, int max_iters = 1000);

/// Operator norm of z(X)^T z(X) - K for one feature draw.
double empirical_approx_error(const KernelSpec& kernel, const Dataset& data, Index m,
                              std::uint64_t seed, Index limit = kDefaultGramLimit);

}  // namespace rica
