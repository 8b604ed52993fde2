#include "plateau/error.hpp"

namespace plateau {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidChart: return "InvalidChart";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GeodesicNotResolved: return "GeodesicNotResolved";
    case ErrorCode::DegenerateQuery: return "DegenerateQuery";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotTwoDimensional: return "NotTwoDimensional";
    case ErrorCode::DegenerateVertex: return "DegenerateVertex";
    case ErrorCode::SamplerFailure: return "SamplerFailure";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::SceneParseError: return "SceneParseError";
    case ErrorCode::SolverError: return "SolverError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& msg)
    : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}

}  // namespace plateau
