#include "maslov/errors.hpp"

namespace maslov {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHalfDimensional: return "NotHalfDimensional";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ToleranceAmbiguous: return "ToleranceAmbiguous";
    case ErrorCode::NotTransversal: return "NotTransversal";
    case ErrorCode::PartitionFailure: return "PartitionFailure";
    case ErrorCode::DiscontinuousPath: return "DiscontinuousPath";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::NotGraphRepresentable: return "NotGraphRepresentable";
    case ErrorCode::DegenerateCrossing: return "DegenerateCrossing";
    case ErrorCode::IrregularCrossing: return "IrregularCrossing";
    case ErrorCode::AmbiguousCrossing: return "AmbiguousCrossing";
    case ErrorCode::NotLagrangian: return "NotLagrangian";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::MorseAmbiguous: return "MorseAmbiguous";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::TauNotSmallEnough: return "TauNotSmallEnough";
    case ErrorCode::SquareInconsistent: return "SquareInconsistent";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::NotHermitian:
    case ErrorCode::NotHalfDimensional:
    case ErrorCode::NotIsotropic:
    case ErrorCode::RankDeficient:
      return true;
    default:
      return false;
  }
}

MaslovError::MaslovError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

void raise(ErrorCode code, const std::string& message) { throw MaslovError(code, message); }

}  // namespace maslov
