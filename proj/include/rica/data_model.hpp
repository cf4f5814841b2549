#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rica/core.hpp"

namespace rica {

/// d×N sample matrix: rows are components, columns are samples.
class Dataset {
 public:
  Dataset() = default;
  /// Throws InvalidArgument on empty shape or non-finite entries.
  explicit Dataset(Matrix values, std::string provenance = {});

  const Matrix& values() const noexcept { return values_; }
  Index dims() const noexcept { return values_.rows(); }
  Index samples() const noexcept { return values_.cols(); }
  const std::string& provenance() const noexcept { return provenance_; }

  /// Single-component view of row `i` as a 1×N dataset.
  Dataset row(Index i) const;

 private:
  Matrix values_;
  std::string provenance_;
};

struct WhiteningTransform {
  Vector mean;
  Matrix matrix;  // symmetric inverse square root of the empirical covariance

  Matrix apply(const Matrix& x) const { return matrix * (x.colwise() - mean); }
};

struct MixingSpec {
  Matrix matrix;
  double condition_number = 1.0;
  std::uint64_t seed = 0;
};

struct Centered {
  Dataset data;
  Vector mean;
};

struct Whitened {
  Dataset data;
  WhiteningTransform transform;
};

/// Empirical covariance with the 1/N convention used throughout.
Matrix empirical_covariance(const Matrix& x);

Centered center(const Dataset& data);

/// Throws DegenerateCovariance if any covariance eigenvalue is at or below
/// `eigen_floor` times the largest one; InvalidArgument if N < 2.
Whitened whiten(const Dataset& data, double eigen_floor = 1e-12);

/// A = U diag(s) V^T with s_max/s_min uniform in [cond_min, cond_max] and
/// s_max = 1. Throws InvalidRange on a bad range.
MixingSpec random_mixing_matrix(Index n, double cond_min, double cond_max, std::uint64_t seed);

Dataset mix(const Dataset& sources, const MixingSpec& spec);

/// Perturbs exactly `count` distinct entries by ±magnitude (fair sign).
Dataset inject_outliers(const Dataset& data, Index count, double magnitude, std::uint64_t seed);

/// Ratio of extreme singular values.
double condition_number(const Matrix& a);

/// One line per component, comma separated, shortest round-trip doubles.
/// `header` lines are written first, each prefixed with "# ".
void write_csv(std::ostream& out, const Dataset& data, const std::string& header = {});
void write_csv_file(const std::string& path, const Dataset& data, const std::string& header = {});
/// Skips blank lines and lines starting with '#'.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace rica
