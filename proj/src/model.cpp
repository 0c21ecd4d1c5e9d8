#include "casimir/model.hpp"

#include <cmath>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::NonPositiveL: return "NonPositiveL";
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::WrongMode: return "WrongMode";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::TauNotInUpperHalfPlane: return "TauNotInUpperHalfPlane";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InsufficientStatistics: return "InsufficientStatistics";
    case ErrorCode::ForceUnderflow: return "ForceUnderflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::Reflecting ? "reflecting" : "absorbing";
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm: return "closed";
    case Method::PdeOracle: return "oracle";
    case Method::Simulation: return "simulation";
    case Method::FluxLimit: return "flux-limit";
  }
  return "unknown";
}

Boundary parse_boundary(std::string_view s) {
  if (s == "reflecting") return Boundary::Reflecting;
  if (s == "absorbing") return Boundary::Absorbing;
  throw Error(ErrorCode::InvalidArgument, "unknown boundary mode '" + std::string(s) + "'");
}

double ModelParams::kappa_reflecting() const { return std::sqrt(2.0 * beta); }
double ModelParams::kappa_absorbing() const { return std::sqrt(8.0 * beta); }

ModelParams validate(const ModelParams& p) {
  if (!std::isfinite(p.beta) || !std::isfinite(p.L))
    throw Error(ErrorCode::NonFiniteParameter, "beta and L must be finite");
  if (!(p.beta > 0.0)) throw Error(ErrorCode::NonPositiveBeta, "beta must be > 0");
  if (!(p.L > 0.0)) throw Error(ErrorCode::NonPositiveL, "L must be > 0");
  return p;
}

}  // namespace casimir
