#include "rica/data_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

namespace rica {

Dataset::Dataset(Matrix values, std::string provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "dataset must have d >= 1 and N >= 1");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "dataset contains non-finite entries");
  }
}

Dataset Dataset::row(Index i) const {
  return Dataset(values_.row(i), provenance_ + "[row " + std::to_string(i) + "]");
}

Matrix empirical_covariance(const Matrix& x) {
  const Matrix xc = x.colwise() - x.rowwise().mean();
  return (xc * xc.transpose()) / static_cast<double>(x.cols());
}

Centered center(const Dataset& data) {
  Vector mean = data.values().rowwise().mean();
  Matrix centered = data.values().colwise() - mean;
  // Second pass removes the rounding residue of the first, so centering
  // already-centered data is a no-op to within a few ulps of zero.
  const Vector residue = centered.rowwise().mean();
  centered.colwise() -= residue;
  mean += residue;
  return {Dataset(std::move(centered), data.provenance()), mean};
}

Whitened whiten(const Dataset& data, double eigen_floor) {
  if (data.samples() < 2) {
    throw Error(ErrorCode::InvalidArgument, "whitening needs at least two samples");
  }
  const Vector mean = data.values().rowwise().mean();
  const Matrix xc = data.values().colwise() - mean;
  const Matrix cov = (xc * xc.transpose()) / static_cast<double>(data.samples());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector& lambda = eig.eigenvalues();
  const double largest = lambda.maxCoeff();
  if (!(largest > 0.0) || lambda.minCoeff() <= eigen_floor * largest) {
    throw Error(ErrorCode::DegenerateCovariance,
                "covariance eigenvalue ratio below floor (rank-deficient data)");
  }
  const Matrix& u = eig.eigenvectors();
  Matrix w = u * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  w = 0.5 * (w + w.transpose()).eval();

  WhiteningTransform transform{mean, std::move(w)};
  Matrix out = transform.matrix * xc;
  return {Dataset(std::move(out), data.provenance() + "|whitened"), std::move(transform)};
}

namespace {

Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

MixingSpec random_mixing_matrix(Index n, double cond_min, double cond_max, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "mixing dimension must be >= 1");
  if (!(cond_min >= 1.0) || !(cond_min <= cond_max)) {
    throw Error(ErrorCode::InvalidRange, "need 1 <= cond_min <= cond_max");
  }
  std::mt19937_64 rng(seed);
  if (n == 1) return {Matrix::Identity(1, 1), 1.0, seed};

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cond = cond_min + (cond_max - cond_min) * unit(rng);
  const Matrix u = random_orthogonal(n, rng);
  const Matrix v = random_orthogonal(n, rng);

  // Log-uniform interior singular values; the extremes pin the ratio.
  Vector s(n);
  s(0) = cond;
  s(n - 1) = 1.0;
  for (Index i = 1; i + 1 < n; ++i) s(i) = std::exp(unit(rng) * std::log(cond));
  s /= cond;

  return {u * s.asDiagonal() * v.transpose(), cond, seed};
}

Dataset mix(const Dataset& sources, const MixingSpec& spec) {
  if (spec.matrix.rows() != spec.matrix.cols() || spec.matrix.cols() != sources.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "mixing matrix does not match source count");
  }
  return Dataset(spec.matrix * sources.values(), sources.provenance() + "|mixed");
}

Dataset inject_outliers(const Dataset& data, Index count, double magnitude, std::uint64_t seed) {
  const Index total = data.dims() * data.samples();
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "outlier count must be >= 0");
  if (count > total) throw Error(ErrorCode::CountTooLarge, "more outliers than entries");

  Matrix values = data.values();
  std::mt19937_64 rng(seed);
  std::vector<Index> slots(static_cast<std::size_t>(total));
  std::iota(slots.begin(), slots.end(), Index{0});
  std::bernoulli_distribution coin(0.5);
  for (Index k = 0; k < count; ++k) {
    std::uniform_int_distribution<Index> pick(k, total - 1);
    std::swap(slots[static_cast<std::size_t>(k)], slots[static_cast<std::size_t>(pick(rng))]);
    const Index flat = slots[static_cast<std::size_t>(k)];
    values.data()[flat] += coin(rng) ? magnitude : -magnitude;
  }
  return Dataset(std::move(values), data.provenance() + "|outliers");
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& header) {
  if (!header.empty()) {
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  const Matrix& v = data.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 0; j < v.cols(); ++j) {
      if (j) out << ',';
      out << format_double(v(i, j));
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const Dataset& data, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_csv(out, data, header);
}

Dataset read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw Error(ErrorCode::Io, "malformed number in CSV: " + line);
      row.push_back(v);
      p = next;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p < end) {
        if (*p != ',') throw Error(ErrorCode::Io, "expected ',' in CSV: " + line);
        ++p;
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Io, "ragged CSV rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Io, "empty CSV");
  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return Dataset(std::move(values), "csv");
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_csv(in);
}

}  // namespace rica
