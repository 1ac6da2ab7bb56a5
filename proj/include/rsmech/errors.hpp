#pragma once

#include <stdexcept>
#include <string>

namespace rsmech {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  InfeasibleTarget,
  RadiusTooLarge,
  Unsupported,
  Degenerate,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a revenue target (or revenue level) exceeds what the reference
/// can deliver with a posted price. Carries both numbers for reporting.
class InfeasibleTargetError : public Error {
 public:
  InfeasibleTargetError(double requested, double ceiling, const std::string& what);

  double requested() const noexcept { return requested_; }
  double ceiling() const noexcept { return ceiling_; }

 private:
  double requested_;
  double ceiling_;
};

[[noreturn]] void throw_domain(const std::string& message);
[[noreturn]] void throw_invalid(const std::string& message);

}  // namespace rsmech
