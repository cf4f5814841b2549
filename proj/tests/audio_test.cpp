#include <doctest.h>

#include <chrono>
#include <cstring>
#include <functional>
#include <random>
#include <numbers>
#include <sstream>

#include "rica/audio.hpp"
#include "support.hpp"

using namespace rica;

namespace {

void put16(std::string& s, int v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-assembled RIFF/WAVE file.
std::string wav_bytes(int channels, int bits, int format, const std::vector<int>& codes,
                      int rate = 8000) {
  std::string data;
  for (int c : codes) put16(data, c);
  std::string s = "RIFF";
  put32(s, static_cast<std::uint32_t>(36 + data.size()));
  s += "WAVEfmt ";
  put32(s, 16);
  put16(s, format);
  put16(s, channels);
  put32(s, static_cast<std::uint32_t>(rate));
  put32(s, static_cast<std::uint32_t>(rate * channels * bits / 8));
  put16(s, channels * bits / 8);
  put16(s, bits);
  s += "data";
  put32(s, static_cast<std::uint32_t>(data.size()));
  return s + data;
}

AudioClip tone(double hz, double seconds, int rate, double phase) {
  const auto n = static_cast<Index>(seconds * rate);
  AudioClip c{Vector(n), rate};
  for (Index k = 0; k < n; ++k)
    c.samples(k) = 0.5 * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(k) / rate + phase);
  return c;
}

double seconds_of(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TEST_CASE("wav reader decodes a hand-built file") {
  std::istringstream in(wav_bytes(1, 16, 1, {0, 16384, -32768, 32767}, 22050));
  const AudioClip c = read_wav(in);
  CHECK(c.sample_rate_hz == 22050);
  REQUIRE(c.samples.size() == 4);
  CHECK(c.samples(0) == 0.0);
  CHECK(c.samples(1) == 0.5);
  CHECK(c.samples(2) == -1.0);
  CHECK(c.samples(3) == 32767.0 / 32768.0);
}

TEST_CASE("wav write/read/write is bit exact") {
  std::vector<int> codes;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(-32768, 32767);
  for (int i = 0; i < 1000; ++i) codes.push_back(pick(rng));
  const std::string original = wav_bytes(1, 16, 1, codes);
  std::istringstream in(original);
  const AudioClip c = read_wav(in);
  std::ostringstream out;
  write_wav(out, c);
  CHECK(out.str() == original);

  AudioClip loud{Vector::Constant(3, 2.0), 8000};
  std::ostringstream clipped;
  write_wav(clipped, loud);
  std::istringstream back(clipped.str());
  CHECK(read_wav(back).samples(0) == 32767.0 / 32768.0);
}

TEST_CASE("wav rejects unsupported input") {
  std::istringstream stereo(wav_bytes(2, 16, 1, {1, 2, 3, 4}));
  try {
    read_wav(stereo);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("stereo") != std::string::npos);
  }
  std::istringstream floats(wav_bytes(1, 16, 3, {1, 2}));
  CHECK_THROWS_AS(read_wav(floats), Error);
  std::istringstream truncated(wav_bytes(1, 16, 1, {1, 2}).substr(0, 20));
  try {
    read_wav(truncated);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  std::istringstream junk("not a wav file at all, just text padding it out");
  CHECK_THROWS_AS(read_wav(junk), Error);
  CHECK_THROWS_AS(read_wav_file("/nonexistent/clip.wav"), Error);
}

TEST_CASE("separation preconditions") {
  SeparationConfig config;
  config.optimizer.seed = 1;
  const AudioClip a = tone(440, 0.5, 8000, 0.0);
  const AudioClip b = tone(660, 0.5, 16000, 0.0);
  try {
    separate_audio(a, b, config);
    FAIL("expected RateMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RateMismatch);
  }
  try {
    separate_audio(tone(440, 0.1, 8000, 0.0), tone(660, 0.5, 8000, 0.0), config);
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooShort);
  }
  try {
    separate_audio(a, a, config);
    FAIL("expected DegenerateCovariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCovariance);
  }
  // Clips of unequal length are cut to the shorter one.
  config.method = Method::FastIca;
  const SeparationResult r = separate_audio(tone(440, 0.5, 8000, 0.0), tone(1230, 0.3, 8000, 1.0), config);
  CHECK(r.outputs[0].samples.size() == 2400);
  CHECK(r.outputs[0].sample_rate_hz == 8000);
}

TEST_CASE("two tones, ten seconds at 8 kHz") {
  SeparationConfig config;
  config.optimizer.seed = 7;
  config.mixing_seed = 8;
  const SeparationResult r = separate_audio(tone(440, 10, 8000, 0.0), tone(1230, 10, 8000, 1.0), config);
  REQUIRE(r.amari_known);
  CHECK(r.record.amari <= 0.10);
  CHECK(r.record.runtime_seconds > 0.0);
  for (const auto& out : r.outputs) CHECK(out.samples.cwiseAbs().maxCoeff() == doctest::Approx(0.9));

  // Through 16-bit files and back into the mixtures.
  SeparationResult stored = r;
  for (auto& out : stored.outputs) {
    std::stringstream file;
    write_wav(file, out);
    out = read_wav(file);
  }
  const Matrix x = remix(stored);
  const double rms = std::sqrt((x - r.mixed).array().square().mean());
  CHECK(rms <= 0.05);
}

TEST_CASE("premixed input has no amari") {
  SeparationConfig config;
  config.optimizer.seed = 2;
  config.mode = AudioMode::PreMixed;
  config.method = Method::FastIca;
  AudioClip a = tone(440, 0.5, 8000, 0.0);
  AudioClip b = tone(1230, 0.5, 8000, 1.0);
  AudioClip x1{0.8 * a.samples + 0.3 * b.samples, 8000};
  AudioClip x2{0.2 * a.samples + 0.9 * b.samples, 8000};
  const SeparationResult r = separate_audio(x1, x2, config);
  CHECK_FALSE(r.amari_known);
  CHECK(std::isnan(r.record.amari));
  CHECK((remix(r) - r.mixed).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("random contrast is cheaper than the kernel oracle on 5000-sample clips") {
  // The dense oracle at 5000 samples needs a 10000x10000 eigensolve, so its
  // time is measured at 1000 samples and scaled by the cube of the size.
  const Matrix s5000 = whiten(test::source_pair('c', 'b', 5000, 3)).data.values();
  const Matrix s1000 = s5000.leftCols(1000);
  OptimizerConfig rgv;
  rgv.seed = 1;
  OptimizerConfig kgv = rgv;
  kgv.contrast = ContrastKind::KGV;
  const ContrastObjective fast(Dataset(s5000), rgv);
  const ContrastObjective slow(Dataset(s1000), kgv);
  const Vector a = Vector::Constant(1, 0.3);
  double t_rgv = 1e300, t_kgv = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    t_rgv = std::min(t_rgv, seconds_of([&] { fast(a); }));
    t_kgv = std::min(t_kgv, seconds_of([&] { slow(a); }));
  }
  CHECK(t_kgv * 125.0 >= 5.0 * t_rgv);
}
