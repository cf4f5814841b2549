#include "rica/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rica/fastica.hpp"

namespace rica {

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Random: return "random";
    case InitKind::FastIca: return "fastica";
    case InitKind::Given: return "given";
  }
  return "unknown";
}

InitKind parse_init(const std::string& name) {
  if (name == "random") return InitKind::Random;
  if (name == "fastica") return InitKind::FastIca;
  if (name == "given") return InitKind::Given;
  throw Error(ErrorCode::InvalidArgument, "unknown init '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be > 0");
  if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd_step must be > 0");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
}

std::string OptimizerConfig::describe() const {
  std::ostringstream os;
  os << "contrast=" << to_string(contrast) << " m=" << m << " gamma=" << format_double(gamma)
     << " sigma=" << format_double(sigma);
  if (is_oracle(contrast)) {
    os << " kappa=" << format_double(kappa) << " kernel_reg="
       << (kernel_regularizer == KernelRegularizer::VariancePenalty ? "variance" : "squared");
  }
  os << " fd_step=" << format_double(fd_step) << " tol=" << format_double(tol)
     << " max_iters=" << max_iters << " restarts=" << restarts << " init=" << to_string(init)
     << " seed=" << seed;
  return os.str();
}

namespace {

constexpr std::uint64_t kFeatureStream = 0xfea7;
constexpr std::uint64_t kRestartStream = 0x5eed;
constexpr std::uint64_t kFastIcaStream = 0xfa57;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ContrastObjective::ContrastObjective(const Dataset& whitened, const OptimizerConfig& config)
    : data_(whitened.values()), config_(config) {
  config_.validate();
  if (!is_oracle(config_.contrast)) {
    const KernelSpec kernel{KernelFamily::Gaussian, config_.sigma};
    maps_.reserve(static_cast<std::size_t>(data_.rows()));
    for (Index i = 0; i < data_.rows(); ++i) {
      maps_.push_back(draw_feature_map(kernel, config_.m, 1,
                                       derive_seed(config_.seed, kFeatureStream,
                                                   static_cast<std::uint64_t>(i))));
    }
  }
}

ContrastValue ContrastObjective::evaluate_rows(const Matrix& rows) const {
  if (is_oracle(config_.contrast)) {
    std::vector<Dataset> vars;
    vars.reserve(static_cast<std::size_t>(rows.rows()));
    for (Index i = 0; i < rows.rows(); ++i) vars.emplace_back(rows.row(i));
    const OracleOptions options{KernelSpec{KernelFamily::Gaussian, config_.sigma}, config_.kappa,
                                config_.kernel_regularizer, config_.oracle_limit};
    const Matrix b = kernel_normalized_pencil(vars, options);
    return config_.contrast == ContrastKind::KCC ? min_eigen_contrast(b) : log_det_contrast(b);
  }
  const CovariancePencil pencil = streamed_covariance(maps_, rows, config_.gamma);
  return config_.contrast == ContrastKind::RCC ? rcc_value(pencil) : rgv_value(pencil);
}

ContrastValue ContrastObjective::evaluate(const Vector& angles) const {
  const Matrix q = givens_to_matrix<double>(angles, data_.rows());
  return evaluate_rows(q * data_);
}

Vector ContrastObjective::gradient(const Vector& angles) const {
  return gradient(angles, config_.fd_step);
}

Vector ContrastObjective::gradient(const Vector& angles, double step) const {
  Vector g(angles.size());
  Vector probe = angles;
  for (Index k = 0; k < angles.size(); ++k) {
    probe(k) = angles(k) + step;
    const double up = (*this)(probe);
    probe(k) = angles(k) - step;
    const double down = (*this)(probe);
    probe(k) = angles(k);
    g(k) = (up - down) / (2.0 * step);
  }
  return g;
}

double contrast_objective(const RotationParams& params, const Dataset& whitened,
                          const OptimizerConfig& config) {
  return ContrastObjective(whitened, config)(params.angles);
}

Vector finite_diff_gradient(const RotationParams& params, const Dataset& whitened,
                            const OptimizerConfig& config) {
  return ContrastObjective(whitened, config).gradient(params.angles);
}

DescentResult gradient_descent(const std::function<double(const Vector&)>& f,
                               const std::function<Vector(const Vector&)>& gradient,
                               Vector start, const DescentOptions& options) {
  DescentResult out;
  auto eval = [&](const Vector& a) {
    ++out.evaluations;
    return f(a);
  };

  Vector point = std::move(start);
  double value = eval(point);
  out.trace.push_back(value);
  double step = 1.0;
  for (int it = 0; it < options.max_iters; ++it) {
    const Vector g = gradient(point);
    const double g2 = g.squaredNorm();
    if (!(g2 > 0.0)) break;

    double t = std::min(step, options.max_step / std::sqrt(g2));
    bool accepted = false;
    Vector candidate;
    double candidate_value = value;
    for (int h = 0; h < options.max_halvings; ++h) {
      candidate = point - t * g;
      candidate_value = eval(candidate);
      if (candidate_value <= value - options.armijo * t * g2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (it == 0 && std::sqrt(g2) > options.stationary_gradient) out.first_search_failed = true;
      break;
    }
    const double improvement = value - candidate_value;
    point = candidate;
    value = candidate_value;
    out.trace.push_back(value);
    ++out.iterations;
    step = 2.0 * t;
    if (improvement < options.tol) break;
  }
  out.point = std::move(point);
  out.value = value;
  return out;
}

namespace {

Vector initial_angles(const Dataset& whitened, const OptimizerConfig& config, int restart) {
  const Index n = whitened.dims();
  const Index count = angle_count(n);
  if (restart == 0) {
    switch (config.init) {
      case InitKind::Given:
        if (config.initial_angles.size() != count) {
          throw Error(ErrorCode::AngleCountMismatch, "initial angles do not match dimension");
        }
        return config.initial_angles;
      case InitKind::FastIca: {
        const auto ica = fastica_baseline(whitened, derive_seed(config.seed, kFastIcaStream));
        return matrix_to_givens(to_special_orthogonal(ica.rotation)).angles;
      }
      case InitKind::Random: break;
    }
  }
  std::mt19937_64 rng(derive_seed(config.seed, kRestartStream, static_cast<std::uint64_t>(restart)));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  Vector a(count);
  for (Index k = 0; k < count; ++k) a(k) = angle(rng);
  return a;
}

}  // namespace

UnmixingModel minimize_contrast(const Dataset& whitened, const OptimizerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ContrastObjective objective(whitened, config);
  const Index n = whitened.dims();

  UnmixingModel model;
  model.whitening = {Vector::Zero(n), Matrix::Identity(n, n)};
  model.contrast = config.contrast;
  model.config = config;

  bool have_best = false;
  int failed_starts = 0;
  for (int r = 0; r < config.restarts; ++r) {
    int clamped = 0;
    int gradient_evals = 0;
    auto f = [&](const Vector& a) {
      const ContrastValue v = objective.evaluate(a);
      clamped += v.clamped;
      return v.value;
    };
    auto grad = [&](const Vector& a) {
      gradient_evals += 2 * static_cast<int>(a.size());
      return objective.gradient(a);
    };
    DescentOptions options;
    options.tol = config.tol;
    options.max_iters = config.max_iters;
    DescentResult res = gradient_descent(f, grad, initial_angles(whitened, config, r), options);
    model.evaluations += res.evaluations + gradient_evals;
    model.clamp_events += clamped;
    if (res.first_search_failed) {
      ++failed_starts;
      continue;
    }
    if (!have_best || res.value < model.final_contrast) {
      have_best = true;
      model.final_contrast = res.value;
      model.rotation = {std::move(res.point)};
      model.iterations = res.iterations;
      model.trace = std::move(res.trace);
      model.restart = r;
    }
  }
  if (failed_starts == config.restarts) {
    throw Error(ErrorCode::NoProgress,
                "every start failed its first line search (degenerate data or gamma too large)");
  }
  model.wall_clock_seconds = seconds_since(start);
  return model;
}

UnmixingModel fit_unmixing(const Dataset& mixed, const OptimizerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Whitened w = whiten(mixed);
  UnmixingModel model = minimize_contrast(w.data, config);
  model.whitening = w.transform;
  model.wall_clock_seconds = seconds_since(start);
  return model;
}

}  // namespace rica
