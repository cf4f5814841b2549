#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rica/core.hpp"
#include "rica/data_model.hpp"
#include "rica/source_bank.hpp"

namespace rica::test {

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = normal(rng);
  return a;
}

inline Matrix uniform_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = u(rng);
  return a;
}

inline double excess_kurtosis(const Vector& v) {
  const double mean = v.mean();
  const Eigen::ArrayXd d = v.array() - mean;
  const double m2 = d.square().mean();
  return d.square().square().mean() / (m2 * m2) - 3.0;
}

inline double correlation(const Vector& a, const Vector& b) {
  const Eigen::ArrayXd x = a.array() - a.mean();
  const Eigen::ArrayXd y = b.array() - b.mean();
  return (x * y).sum() / std::sqrt(x.square().sum() * y.square().sum());
}

// Two standardized sources from the catalog, stacked as rows.
inline Dataset source_pair(char first, char second, Index n, std::uint64_t seed) {
  Matrix s(2, n);
  s.row(0) = sample_source(find_source(first), n, seed * 2 + 1).transpose();
  s.row(1) = sample_source(find_source(second), n, seed * 2 + 2).transpose();
  return Dataset(std::move(s));
}

inline Matrix rotation2(double theta) {
  Matrix q(2, 2);
  q << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return q;
}

}  // namespace rica::test
