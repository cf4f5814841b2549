#pragma once

#include <span>
#include <string>

#include "rica/core.hpp"
#include "rica/data_model.hpp"
#include "rica/random_features.hpp"

namespace rica {

enum class ContrastKind { RCC, RGV, KCC, KGV };

std::string to_string(ContrastKind kind);
/// Accepts "rcc", "rgv", "kcc", "kgv" (any case).
ContrastKind parse_contrast(const std::string& name);
inline bool is_oracle(ContrastKind kind) {
  return kind == ContrastKind::KCC || kind == ContrastKind::KGV;
}

/// Regularized covariance of the stacked, centered random features of n_s
/// variables. Block (i, j) is C_ij = (1/N) sum_k z(x_i^k) z(x_j^k)^T.
struct CovariancePencil {
  Matrix covariance;  // (n_s m)×(n_s m), gamma not added
  double gamma = 0.0;
  Index variables = 0;
  Index features = 0;

  auto block(Index i, Index j) const {
    return covariance.block(i * features, j * features, features, features);
  }
};

/// Eigenvalues of the normalized pencil D^{-1/2} C D^{-1/2}, descending.
struct PencilSpectrum {
  Vector eigenvalues;
  double rho = 0.0;  // largest eigenvalue minus one, clamped to [0, 1]
};

struct ContrastValue {
  double value = 0.0;
  int clamped = 0;  // eigenvalues raised to kEigenClamp before the logarithm
};

inline constexpr double kEigenClamp = 1e-12;

/// Centers each feature row and accumulates the block covariance in sample
/// chunks of `chunk` columns (0 = one chunk). Throws SampleMismatch when the
/// matrices disagree on N, DimensionMismatch when they disagree on m.
CovariancePencil covariance_blocks(std::span<const Matrix> features, double gamma,
                                   Index chunk = 0);

/// Same pencil as covariance_blocks over apply_feature_map(maps[i], rows.row(i)),
/// but features are generated `chunk` samples at a time and never stored in
/// full. Agrees with the two-step route to rounding error.
CovariancePencil streamed_covariance(std::span<const FeatureMap> maps, const Matrix& rows,
                                     double gamma, Index chunk = 2048);

/// Symmetric matrix with identity diagonal blocks and off-diagonal blocks
/// L_i^{-1} C_ij L_j^{-T}, where L_i L_i^T = C_ii + gamma I. Congruent to
/// D^{-1/2} C D^{-1/2}, so the spectra agree. Throws SingularDiagonal.
Matrix normalized_pencil(const CovariancePencil& pencil);

PencilSpectrum solve_pencil(const CovariancePencil& pencil);

/// -1/2 log(mu_min).
ContrastValue rcc_value(const CovariancePencil& pencil);
/// -1/2 sum log(mu_k) = -1/2 log det of the normalized pencil.
ContrastValue rgv_value(const CovariancePencil& pencil);

double rcc(std::span<const Matrix> features, double gamma);
double rgv(std::span<const Matrix> features, double gamma);

/// Contrast from an already normalized symmetric pencil with unit diagonal.
ContrastValue min_eigen_contrast(const Matrix& normalized);
ContrastValue log_det_contrast(const Matrix& normalized);

// --- exact kernel oracles -------------------------------------------------

/// How the kernel pencil is regularized. VariancePenalty uses
/// K_i^2 + N kappa K_i, the exact kernel counterpart of the random-feature
/// pencil with gamma = kappa. Squared uses (K_i + N kappa/2 I)^2.
enum class KernelRegularizer { VariancePenalty, Squared };

inline constexpr Index kDefaultOracleLimit = 1000;

struct OracleOptions {
  KernelSpec kernel;
  double kappa = 0.02;
  KernelRegularizer regularizer = KernelRegularizer::VariancePenalty;
  Index limit = kDefaultOracleLimit;
};

/// Normalized kernel pencil (identity diagonal blocks, r_i r_j off the
/// diagonal) built from centered Gram matrices. One dataset per variable.
Matrix kernel_normalized_pencil(std::span<const Dataset> variables, const OracleOptions& options);

double kcc_oracle(std::span<const Dataset> variables, const OracleOptions& options = {});
double kgv_oracle(std::span<const Dataset> variables, const OracleOptions& options = {});

/// Splits a d×N dataset into d single-row datasets.
std::vector<Dataset> split_rows(const Dataset& data);

}  // namespace rica
