#pragma once

#include <stdexcept>
#include <string>

#include "plateau/point.hpp"

namespace plateau {

enum class ErrorCode {
  InvalidChart,
  InvalidArgument,
  GeodesicNotResolved,
  DegenerateQuery,
  NoConvergence,
  NotTwoDimensional,
  DegenerateVertex,
  SamplerFailure,
  SingularSystem,
  InvalidCurve,
  RadiusTooLarge,
  DegenerateAngle,
  BoundaryMismatch,
  SceneParseError,
  SolverError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by iterative oracles; carries the best iterate found.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& msg, Point best, double residual)
      : Error(ErrorCode::NoConvergence, msg), best_(std::move(best)), residual_(residual) {}
  const Point& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  Point best_;
  double residual_;
};

}  // namespace plateau
