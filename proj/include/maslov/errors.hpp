#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

/// Failure categories raised across the library.
enum class ErrorCode {
  NotHalfDimensional,
  NotIsotropic,
  RankDeficient,
  Singular,
  ToleranceAmbiguous,
  NotTransversal,
  PartitionFailure,
  DiscontinuousPath,
  NoCrossing,
  NotGraphRepresentable,
  DegenerateCrossing,
  IrregularCrossing,
  AmbiguousCrossing,
  NotLagrangian,
  NotHermitian,
  EigensolverFailure,
  MorseAmbiguous,
  QuadratureFailure,
  TruncationNotConverged,
  TauNotSmallEnough,
  SquareInconsistent,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// True for codes that signal bad user input rather than a numerical fault.
bool is_config_error(ErrorCode code) noexcept;

class MaslovError : public std::runtime_error {
 public:
  MaslovError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace maslov
