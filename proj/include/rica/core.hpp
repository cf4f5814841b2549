#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace rica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

inline constexpr std::string_view kVersion = "0.3.1";

enum class ErrorCode {
  DegenerateCovariance,
  InvalidRange,
  DimensionMismatch,
  CountTooLarge,
  UnsupportedKernel,
  OracleSizeExceeded,
  SampleMismatch,
  SingularDiagonal,
  AngleCountMismatch,
  NoProgress,
  SingularMatrix,
  RateMismatch,
  TooShort,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports. `code()` names the condition so callers
/// can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Mixes a master seed with a counter path into an independent 64-bit seed
/// (splitmix64 finalizer applied per component).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace rica
