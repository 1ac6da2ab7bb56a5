#include "rsmech/errors.hpp"

namespace rsmech {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::InfeasibleTarget: return "infeasible-target";
    case ErrorCode::RadiusTooLarge: return "radius-too-large";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

InfeasibleTargetError::InfeasibleTargetError(double requested, double ceiling,
                                             const std::string& what)
    : Error(ErrorCode::InfeasibleTarget, what), requested_(requested), ceiling_(ceiling) {}

void throw_domain(const std::string& message) { throw Error(ErrorCode::Domain, message); }

void throw_invalid(const std::string& message) { throw Error(ErrorCode::InvalidArgument, message); }

}  // namespace rsmech
