#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rica/contrast.hpp"
#include "rica/data_model.hpp"
#include "rica/random_features.hpp"
#include "rica/rotation.hpp"

namespace rica {

enum class InitKind { Random, FastIca, Given };

std::string to_string(InitKind kind);
InitKind parse_init(const std::string& name);

struct OptimizerConfig {
  ContrastKind contrast = ContrastKind::RGV;
  Index m = 200;
  double gamma = 0.02;
  double sigma = 1.0;
  double kappa = 0.02;  // kernel oracle contrasts only
  KernelRegularizer kernel_regularizer = KernelRegularizer::VariancePenalty;
  Index oracle_limit = kDefaultOracleLimit;
  double fd_step = 1e-4;
  double tol = 1e-5;
  int max_iters = 100;
  int restarts = 3;
  std::uint64_t seed = 0;
  InitKind init = InitKind::FastIca;
  Vector initial_angles;  // used when init == Given

  /// Throws InvalidArgument for out-of-range settings.
  void validate() const;
  std::string describe() const;
};

struct UnmixingModel {
  WhiteningTransform whitening;
  RotationParams rotation;
  ContrastKind contrast = ContrastKind::RGV;
  double final_contrast = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int clamp_events = 0;
  int restart = 0;  // index of the winning start
  double wall_clock_seconds = 0.0;
  std::vector<double> trace;  // contrast after each accepted step of the winning start
  OptimizerConfig config;

  Index components() const { return whitening.matrix.rows(); }
  Matrix rotation_matrix() const { return givens_to_matrix(rotation, components()); }
  /// W = Q · whitening matrix.
  Matrix unmixing() const { return rotation_matrix() * whitening.matrix; }
  Matrix apply(const Matrix& x) const { return rotation_matrix() * whitening.apply(x); }
};

/// Contrast of Q(angles)·x for fixed whitened x. Random feature maps (one per
/// component, d = 1) are drawn once from the config seed at construction.
class ContrastObjective {
 public:
  ContrastObjective(const Dataset& whitened, const OptimizerConfig& config);

  double operator()(const Vector& angles) const { return evaluate(angles).value; }
  ContrastValue evaluate(const Vector& angles) const;
  /// Central differences with step config.fd_step.
  Vector gradient(const Vector& angles) const;
  Vector gradient(const Vector& angles, double step) const;

  Index components() const { return data_.rows(); }
  const std::vector<FeatureMap>& feature_maps() const { return maps_; }
  /// Contrast of the given rows as they are (no rotation).
  ContrastValue evaluate_rows(const Matrix& rows) const;

 private:
  Matrix data_;
  OptimizerConfig config_;
  std::vector<FeatureMap> maps_;
};

double contrast_objective(const RotationParams& params, const Dataset& whitened,
                          const OptimizerConfig& config);
Vector finite_diff_gradient(const RotationParams& params, const Dataset& whitened,
                            const OptimizerConfig& config);

struct DescentOptions {
  double tol = 1e-5;
  int max_iters = 100;
  double armijo = 1e-4;
  int max_halvings = 40;
  double max_step = 0.5;            // cap on the first trial step length
  double stationary_gradient = 1e-3;  // below this a failed first search is not a failure
};

struct DescentResult {
  Vector point;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool first_search_failed = false;
  std::vector<double> trace;  // value at the start and after each accepted step
};

/// Steepest descent with halving backtracking under the Armijo condition.
/// Stops when an accepted step improves the value by less than `tol`, when a
/// line search fails, or after `max_iters` steps. Accepted values are
/// nonincreasing.
DescentResult gradient_descent(const std::function<double(const Vector&)>& f,
                               const std::function<Vector(const Vector&)>& gradient,
                               Vector start, const DescentOptions& options);

/// Backtracking gradient descent on Givens angles from `restarts` starts;
/// returns the lowest-contrast result. The whitening in the returned model is
/// the identity. Throws NoProgress if every start fails its first line search.
UnmixingModel minimize_contrast(const Dataset& whitened, const OptimizerConfig& config);

/// whiten() followed by minimize_contrast(); the model carries the whitening.
UnmixingModel fit_unmixing(const Dataset& mixed, const OptimizerConfig& config);

}  // namespace rica
