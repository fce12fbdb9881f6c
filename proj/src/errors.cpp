#include "compop/errors.hpp"

namespace compop {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EvaluationTooCloseToBoundary: return "EvaluationTooCloseToBoundary";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::SelfMapViolation: return "SelfMapViolation";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientResolution: return "InsufficientResolution";
    case ErrorCode::LowerBoundViolated: return "LowerBoundViolated";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::RootIsolationFailed: return "RootIsolationFailed";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace compop
