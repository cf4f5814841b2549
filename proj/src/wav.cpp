#include "rica/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace rica {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void put16(std::ostream& out, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b.data(), 2);
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::Io, std::string("truncated WAV: ") + what);
  }
}

}  // namespace

AudioClip read_wav(std::istream& in) {
  unsigned char riff[12];
  read_exact(in, riff, 12, "RIFF header");
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::Io, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  for (;;) {
    unsigned char head[8];
    read_exact(in, head, 8, "chunk header");
    const std::uint32_t size = le32(head + 4);
    if (std::memcmp(head, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::Io, "fmt chunk too small");
      std::vector<unsigned char> fmt(size + (size & 1u));
      read_exact(in, fmt.data(), fmt.size(), "fmt chunk");
      const std::uint16_t format = le16(fmt.data());
      channels = le16(fmt.data() + 2);
      rate = le32(fmt.data() + 4);
      bits = le16(fmt.data() + 14);
      if (format != 1) throw Error(ErrorCode::InvalidArgument, "only PCM WAV is supported");
      if (channels != 1) {
        throw Error(ErrorCode::InvalidArgument,
                    (channels == 2 ? std::string("stereo WAV")
                                   : "WAV with " + std::to_string(channels) + " channels") +
                        " is not supported; convert to mono first");
      }
      if (bits != 16) throw Error(ErrorCode::InvalidArgument, "only 16-bit PCM is supported");
      have_fmt = true;
    } else if (std::memcmp(head, "data", 4) == 0) {
      if (!have_fmt) throw Error(ErrorCode::Io, "data chunk before fmt chunk");
      const std::size_t count = size / 2;
      std::vector<unsigned char> raw(count * 2);
      read_exact(in, raw.data(), raw.size(), "sample data");
      AudioClip clip;
      clip.sample_rate_hz = static_cast<int>(rate);
      clip.samples.resize(static_cast<Index>(count));
      for (std::size_t k = 0; k < count; ++k) {
        const auto code = static_cast<std::int16_t>(le16(raw.data() + 2 * k));
        clip.samples(static_cast<Index>(k)) = static_cast<double>(code) / 32768.0;
      }
      if (clip.sample_rate_hz <= 0) throw Error(ErrorCode::Io, "invalid sample rate");
      return clip;
    } else {
      in.ignore(static_cast<std::streamsize>(size + (size & 1u)));
      if (!in) throw Error(ErrorCode::Io, "truncated chunk");
    }
  }
}

AudioClip read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_wav(in);
}

void write_wav(std::ostream& out, const AudioClip& clip) {
  if (clip.sample_rate_hz <= 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be > 0");
  const auto count = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = count * 2;
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_bytes);
  for (Index k = 0; k < clip.samples.size(); ++k) {
    const double scaled = std::nearbyint(clip.samples(k) * 32768.0);
    const double clipped = std::clamp(scaled, -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(clipped)));
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing WAV");
}

void write_wav_file(const std::string& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_wav(out, clip);
}

}  // namespace rica
