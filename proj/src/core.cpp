#include "rica/core.hpp"

namespace rica {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CountTooLarge: return "CountTooLarge";
    case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorCode::OracleSizeExceeded: return "OracleSizeExceeded";
    case ErrorCode::SampleMismatch: return "SampleMismatch";
    case ErrorCode::SingularDiagonal: return "SingularDiagonal";
    case ErrorCode::AngleCountMismatch: return "AngleCountMismatch";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = splitmix(master);
  h = splitmix(h ^ a);
  h = splitmix(h ^ (b + 0x632be59bd9b4e019ULL));
  h = splitmix(h ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

}  // namespace rica
