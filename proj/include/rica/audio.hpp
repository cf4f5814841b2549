#pragma once

#include <array>
#include <cstdint>

#include "rica/evaluation.hpp"
#include "rica/wav.hpp"

namespace rica {

enum class AudioMode {
  SelfMix,   // inputs are clean sources; mix them with a seeded random matrix
  PreMixed,  // inputs are already recorded mixtures
};

struct SeparationConfig {
  Method method = Method::RGV;
  OptimizerConfig optimizer;
  AudioMode mode = AudioMode::SelfMix;
  std::uint64_t mixing_seed = 0;
  double cond_min = 1.0;
  double cond_max = 2.0;
  Index min_samples = 1000;
  double peak = 0.9;
};

struct SeparationResult {
  std::array<AudioClip, 2> outputs;
  ExperimentRecord record;       // amari is NaN when the mixing is unknown
  bool amari_known = false;
  Matrix mixed;                  // 2×N mixtures the separation was run on
  Matrix mixing;                 // set in SelfMix mode
  Matrix unmixing;               // W, acting on centered mixtures
  Vector mixture_mean;
  Vector output_gain;            // outputs = gain ⊙ (W (x - mean))
};

/// Truncates both clips to the shorter length and separates them. Throws
/// RateMismatch, TooShort, or DegenerateCovariance (e.g. identical clips).
SeparationResult separate_audio(const AudioClip& first, const AudioClip& second,
                                const SeparationConfig& config);

/// Mixtures reconstructed from the written outputs with the estimated inverse.
Matrix remix(const SeparationResult& result);

}  // namespace rica
