#pragma once

#include <iosfwd>
#include <string>

#include "rica/core.hpp"

namespace rica {

/// Mono clip with samples in [-1, 1].
struct AudioClip {
  Vector samples;
  int sample_rate_hz = 8000;
};

/// RIFF/WAVE, PCM 16-bit, mono. Sample v maps to v / 32768. Throws Io on
/// malformed files and InvalidArgument for stereo or non-16-bit PCM.
AudioClip read_wav(std::istream& in);
AudioClip read_wav_file(const std::string& path);

/// Canonical 44-byte header; samples rounded to the nearest PCM code and
/// clipped to [-32768, 32767]. Reading a file written here returns the same
/// PCM codes, so read/write/read is bit-exact.
void write_wav(std::ostream& out, const AudioClip& clip);
void write_wav_file(const std::string& path, const AudioClip& clip);

}  // namespace rica
