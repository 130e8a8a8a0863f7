#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace eigenforce {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NonConvergence,
  PairingFailure,
  SingularGap,
  RealEigenvalue,
  ZeroSeparation,
  EmptyEstimate,
  NonpositiveLength,
  NotUnimodular,
  SpectralSingularity,
  ConfigInvalid,
  ParseError,
  UnsupportedFormat,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when |lambda_i - lambda_j| falls under the gap tolerance.
class SingularGapError : public Error {
 public:
  SingularGapError(std::size_t i, std::size_t j, double gap);

  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t i_, j_;
  double gap_;
};

// Configuration problem anchored to a dotted key path ("time.t1").
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(ErrorCode::ConfigInvalid, key_path.empty() ? what : key_path + ": " + what),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace eigenforce
