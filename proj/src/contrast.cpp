#include "rica/contrast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

namespace rica {

std::string to_string(ContrastKind kind) {
  switch (kind) {
    case ContrastKind::RCC: return "rcc";
    case ContrastKind::RGV: return "rgv";
    case ContrastKind::KCC: return "kcc";
    case ContrastKind::KGV: return "kgv";
  }
  return "unknown";
}

ContrastKind parse_contrast(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rcc") return ContrastKind::RCC;
  if (lower == "rgv") return ContrastKind::RGV;
  if (lower == "kcc") return ContrastKind::KCC;
  if (lower == "kgv") return ContrastKind::KGV;
  throw Error(ErrorCode::InvalidArgument, "unknown contrast '" + name + "'");
}

CovariancePencil covariance_blocks(std::span<const Matrix> features, double gamma, Index chunk) {
  if (features.empty()) throw Error(ErrorCode::InvalidArgument, "no feature matrices");
  if (gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
  const Index m = features.front().rows();
  const Index n = features.front().cols();
  for (const auto& f : features) {
    if (f.cols() != n) throw Error(ErrorCode::SampleMismatch, "feature matrices differ in N");
    if (f.rows() != m) throw Error(ErrorCode::DimensionMismatch, "feature matrices differ in m");
  }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "covariance needs N >= 2");

  const auto vars = static_cast<Index>(features.size());
  Matrix stacked(vars * m, n);
  for (Index i = 0; i < vars; ++i) {
    const Matrix& f = features[static_cast<std::size_t>(i)];
    stacked.middleRows(i * m, m) = f.colwise() - f.rowwise().mean();
  }

  const Index dim = vars * m;
  Matrix cov = Matrix::Zero(dim, dim);
  const Index step = chunk > 0 ? chunk : n;
  for (Index start = 0; start < n; start += step) {
    const Index width = std::min(step, n - start);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(stacked.middleCols(start, width));
  }
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  cov /= static_cast<double>(n);

  return {std::move(cov), gamma, vars, m};
}

CovariancePencil streamed_covariance(std::span<const FeatureMap> maps, const Matrix& rows,
                                     double gamma, Index chunk) {
  if (maps.empty()) throw Error(ErrorCode::InvalidArgument, "no feature maps");
  if (gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
  const auto vars = static_cast<Index>(maps.size());
  if (rows.rows() != vars) throw Error(ErrorCode::DimensionMismatch, "one row per feature map");
  const Index m = maps.front().features();
  for (const auto& map : maps) {
    if (map.features() != m) throw Error(ErrorCode::DimensionMismatch, "feature maps differ in m");
    if (map.input_dims() != 1) throw Error(ErrorCode::DimensionMismatch, "scalar maps expected");
  }
  const Index n = rows.cols();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "covariance needs N >= 2");

  const Index dim = vars * m;
  const Index step = chunk > 0 ? std::min(chunk, n) : n;
  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  Matrix cov = Matrix::Zero(dim, dim);
  Vector sum = Vector::Zero(dim);
  Matrix z(dim, step);
  for (Index start = 0; start < n; start += step) {
    const Index width = std::min(step, n - start);
    for (Index i = 0; i < vars; ++i) {
      const FeatureMap& map = maps[static_cast<std::size_t>(i)];
      auto block = z.block(i * m, 0, m, width);
      block.noalias() = map.frequencies * rows.block(i, start, 1, width);
      block.colwise() += map.phases;
      block = scale * block.array().cos().matrix();
    }
    const auto used = z.leftCols(width);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(used);
    sum += used.rowwise().sum();
  }
  const Vector mean = sum / static_cast<double>(n);
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  cov /= static_cast<double>(n);
  cov.noalias() -= mean * mean.transpose();
  return {std::move(cov), gamma, vars, m};
}

namespace {

std::vector<Matrix> diagonal_factors(const CovariancePencil& pencil) {
  std::vector<Matrix> factors;
  factors.reserve(static_cast<std::size_t>(pencil.variables));
  const Index m = pencil.features;
  for (Index i = 0; i < pencil.variables; ++i) {
    Matrix d = pencil.block(i, i);
    d.diagonal().array() += pencil.gamma;
    Eigen::LLT<Matrix> llt(d);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularDiagonal, "diagonal block not positive definite");
    }
    Matrix l = llt.matrixL();
    const Vector diag = l.diagonal();
    const double lo = diag.minCoeff();
    const double hi = diag.maxCoeff();
    if (!(lo > 0.0) || lo * lo <= 1e-14 * hi * hi * static_cast<double>(m)) {
      throw Error(ErrorCode::SingularDiagonal,
                  "diagonal block numerically singular; increase gamma");
    }
    factors.push_back(std::move(l));
  }
  return factors;
}

// L_i^{-1} C_ij L_j^{-T}
Matrix whitened_block(const CovariancePencil& pencil, const std::vector<Matrix>& factors, Index i,
                      Index j) {
  const auto& li = factors[static_cast<std::size_t>(i)];
  const auto& lj = factors[static_cast<std::size_t>(j)];
  Matrix t = li.triangularView<Eigen::Lower>().solve(pencil.block(i, j));
  Matrix u = lj.triangularView<Eigen::Lower>().solve(t.transpose());
  return u.transpose();
}

double clamped_log(double mu, int& clamped) {
  if (mu < kEigenClamp) {
    ++clamped;
    mu = kEigenClamp;
  }
  return std::log(mu);
}

}  // namespace

Matrix normalized_pencil(const CovariancePencil& pencil) {
  const auto factors = diagonal_factors(pencil);
  const Index m = pencil.features;
  const Index dim = pencil.variables * m;
  Matrix b = Matrix::Identity(dim, dim);
  for (Index i = 0; i < pencil.variables; ++i) {
    for (Index j = i + 1; j < pencil.variables; ++j) {
      Matrix w = whitened_block(pencil, factors, i, j);
      b.block(i * m, j * m, m, m) = w;
      b.block(j * m, i * m, m, m) = w.transpose();
    }
  }
  return b;
}

PencilSpectrum solve_pencil(const CovariancePencil& pencil) {
  const Matrix b = normalized_pencil(pencil);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b, Eigen::EigenvaluesOnly);
  PencilSpectrum out;
  out.eigenvalues = eig.eigenvalues().reverse();
  out.rho = std::clamp(out.eigenvalues(0) - 1.0, 0.0, 1.0);
  return out;
}

ContrastValue min_eigen_contrast(const Matrix& normalized) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized, Eigen::EigenvaluesOnly);
  ContrastValue out;
  out.value = -0.5 * clamped_log(eig.eigenvalues()(0), out.clamped);
  return out;
}

ContrastValue log_det_contrast(const Matrix& normalized) {
  ContrastValue out;
  Eigen::LLT<Matrix> llt(normalized);
  if (llt.info() == Eigen::Success) {
    const Vector diag = Matrix(llt.matrixLLT()).diagonal();
    if (diag.minCoeff() * diag.minCoeff() > kEigenClamp) {
      out.value = -diag.array().log().sum();
      return out;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Index k = 0; k < eig.eigenvalues().size(); ++k) {
    sum += clamped_log(eig.eigenvalues()(k), out.clamped);
  }
  out.value = -0.5 * sum;
  return out;
}

ContrastValue rcc_value(const CovariancePencil& pencil) {
  if (pencil.variables == 2) {
    // Spectrum is {1 ± s_k} for the singular values s_k of the off-diagonal
    // block, so only the largest singular value is needed.
    const auto factors = diagonal_factors(pencil);
    const Matrix w = whitened_block(pencil, factors, 0, 1);
    const Matrix gram = w.transpose() * w;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double s_max = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    ContrastValue out;
    out.value = -0.5 * clamped_log(1.0 - s_max, out.clamped);
    return out;
  }
  return min_eigen_contrast(normalized_pencil(pencil));
}

ContrastValue rgv_value(const CovariancePencil& pencil) {
  return log_det_contrast(normalized_pencil(pencil));
}

double rcc(std::span<const Matrix> features, double gamma) {
  return rcc_value(covariance_blocks(features, gamma)).value;
}

double rgv(std::span<const Matrix> features, double gamma) {
  return rgv_value(covariance_blocks(features, gamma)).value;
}

std::vector<Dataset> split_rows(const Dataset& data) {
  std::vector<Dataset> rows;
  rows.reserve(static_cast<std::size_t>(data.dims()));
  for (Index i = 0; i < data.dims(); ++i) rows.push_back(data.row(i));
  return rows;
}

Matrix kernel_normalized_pencil(std::span<const Dataset> variables, const OracleOptions& options) {
  if (variables.empty()) throw Error(ErrorCode::InvalidArgument, "no variables");
  const Index n = variables.front().samples();
  for (const auto& v : variables) {
    if (v.samples() != n) throw Error(ErrorCode::SampleMismatch, "variables differ in N");
  }
  if (n > options.limit) {
    throw Error(ErrorCode::OracleSizeExceeded, "N=" + std::to_string(n) +
                                                   " exceeds kernel oracle limit " +
                                                   std::to_string(options.limit));
  }
  if (!(options.kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");

  const double nn = static_cast<double>(n);
  std::vector<Matrix> shrunk;
  shrunk.reserve(variables.size());
  for (const auto& v : variables) {
    Matrix k = gram_matrix(options.kernel, v, options.limit);
    const Vector row_mean = k.rowwise().mean();
    const double total_mean = row_mean.mean();
    k.colwise() -= row_mean;
    k.rowwise() -= row_mean.transpose();
    k.array() += total_mean;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
    const Vector lambda = eig.eigenvalues().cwiseMax(0.0);
    Vector f(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i) {
      const double l = lambda(i);
      f(i) = options.regularizer == KernelRegularizer::VariancePenalty
                 ? std::sqrt(l / (l + nn * options.kappa))
                 : l / (l + 0.5 * nn * options.kappa);
    }
    const Matrix& u = eig.eigenvectors();
    shrunk.push_back(u * f.asDiagonal() * u.transpose());
  }

  const auto vars = static_cast<Index>(variables.size());
  Matrix b = Matrix::Identity(vars * n, vars * n);
  for (Index i = 0; i < vars; ++i) {
    for (Index j = i + 1; j < vars; ++j) {
      Matrix r = shrunk[static_cast<std::size_t>(i)] * shrunk[static_cast<std::size_t>(j)];
      b.block(j * n, i * n, n, n) = r.transpose();
      b.block(i * n, j * n, n, n) = std::move(r);
    }
  }
  return b;
}

double kcc_oracle(std::span<const Dataset> variables, const OracleOptions& options) {
  return min_eigen_contrast(kernel_normalized_pencil(variables, options)).value;
}

double kgv_oracle(std::span<const Dataset> variables, const OracleOptions& options) {
  return log_det_contrast(kernel_normalized_pencil(variables, options)).value;
}

}  // namespace rica
