#include "rica/audio.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "rica/fastica.hpp"

namespace rica {

namespace {

RowVector standardize(const Vector& v) {
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().mean());
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateCovariance, "silent clip");
  return ((v.array() - mean) / sd).matrix().transpose();
}

}  // namespace

SeparationResult separate_audio(const AudioClip& first, const AudioClip& second,
                                const SeparationConfig& config) {
  if (first.sample_rate_hz != second.sample_rate_hz) {
    throw Error(ErrorCode::RateMismatch, "clips have different sample rates");
  }
  const Index n = std::min(first.samples.size(), second.samples.size());
  if (n < config.min_samples) {
    throw Error(ErrorCode::TooShort, "need at least " + std::to_string(config.min_samples) +
                                         " samples, got " + std::to_string(n));
  }

  SeparationResult result;
  Matrix inputs(2, n);
  if (config.mode == AudioMode::SelfMix) {
    inputs.row(0) = standardize(first.samples.head(n));
    inputs.row(1) = standardize(second.samples.head(n));
    const MixingSpec spec =
        random_mixing_matrix(2, config.cond_min, config.cond_max, config.mixing_seed);
    result.mixing = spec.matrix;
    result.mixed = spec.matrix * inputs;
  } else {
    inputs.row(0) = first.samples.head(n).transpose();
    inputs.row(1) = second.samples.head(n).transpose();
    result.mixed = inputs;
  }

  const auto start = std::chrono::steady_clock::now();
  const Whitened white = whiten(Dataset(result.mixed, "audio"));
  double contrast = 0.0;
  if (config.method == Method::FastIca) {
    const auto ica = fastica_baseline(white.data, config.optimizer.seed);
    result.unmixing = ica.rotation * white.transform.matrix;
  } else {
    OptimizerConfig opt = config.optimizer;
    switch (config.method) {
      case Method::RCC: opt.contrast = ContrastKind::RCC; break;
      case Method::KCC: opt.contrast = ContrastKind::KCC; break;
      case Method::KGV: opt.contrast = ContrastKind::KGV; break;
      default: opt.contrast = ContrastKind::RGV; break;
    }
    const UnmixingModel model = minimize_contrast(white.data, opt);
    result.unmixing = model.rotation_matrix() * white.transform.matrix;
    contrast = model.final_contrast;
  }
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.mixture_mean = white.transform.mean;
  const Matrix y = result.unmixing * (result.mixed.colwise() - result.mixture_mean);
  result.output_gain.resize(2);
  for (Index i = 0; i < 2; ++i) {
    const double peak = y.row(i).cwiseAbs().maxCoeff();
    result.output_gain(i) = peak > 0.0 ? config.peak / peak : 1.0;
    result.outputs[static_cast<std::size_t>(i)] = {
        (result.output_gain(i) * y.row(i)).transpose(), first.sample_rate_hz};
  }

  ExperimentRecord& rec = result.record;
  rec.source_labels = "audio";
  rec.n = n;
  rec.method = config.method;
  rec.seed = config.optimizer.seed;
  rec.runtime_seconds = runtime;
  rec.contrast = contrast;
  result.amari_known = config.mode == AudioMode::SelfMix;
  rec.amari = result.amari_known ? amari_distance(result.unmixing, result.mixing.inverse())
                                 : std::numeric_limits<double>::quiet_NaN();
  return result;
}

Matrix remix(const SeparationResult& result) {
  const Index n = result.outputs[0].samples.size();
  Matrix y(2, n);
  for (Index i = 0; i < 2; ++i) {
    y.row(i) = result.outputs[static_cast<std::size_t>(i)].samples.transpose() /
               result.output_gain(i);
  }
  Matrix x = result.unmixing.inverse() * y;
  x.colwise() += result.mixture_mean;
  return x;
}

}  // namespace rica
