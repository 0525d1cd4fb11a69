#pragma once

#include <stdexcept>
#include <string>

namespace degenlab {

/// Failure categories surfaced by the library.
enum class ErrorKind {
  InvalidFunction,     ///< malformed sampled function (non-finite values, bad size)
  InvalidSpec,         ///< malformed norm/coefficient specification
  CoverageError,       ///< cutoff shift range does not cover the function support
  SupportError,        ///< function support touches a boundary where it must not
  DegenerateRoots,     ///< characteristic quadratic has (nearly) coincident roots
  ForbiddenExponent,   ///< weight exponent sits on an excluded value
  DomainError,         ///< argument outside the admissible domain
  QuadratureError,     ///< adaptive quadrature failed to converge
  InvalidGrid,         ///< malformed grid request
  SingularOperator,    ///< linear system factorization broke down
  TruncationError,     ///< data support too close to the truncated domain ends
  NonConvergence,      ///< refinement study failed to converge
  NoCriticalRadius,    ///< no radius attains the requested density level
  CoverageShortfall,   ///< selected cylinders leave too much residual mass
  HypothesisViolated,  ///< density/containment hypothesis fails
  ConfigError,         ///< malformed experiment configuration
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidFunction: return "InvalidFunction";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::CoverageError: return "CoverageError";
    case ErrorKind::SupportError: return "SupportError";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::ForbiddenExponent: return "ForbiddenExponent";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::QuadratureError: return "QuadratureError";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::TruncationError: return "TruncationError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NoCriticalRadius: return "NoCriticalRadius";
    case ErrorKind::CoverageShortfall: return "CoverageShortfall";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

/// Exception type used throughout; carries a machine-readable kind tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace degenlab
