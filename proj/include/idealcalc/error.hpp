#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idealcalc {

enum class ErrorKind {
  DomainMismatch,
  NotClosed,
  Undecidable,
  OrdinalOutOfRange,
  NonpositiveEpsilon,
  RefinementNotClosed,
  WitnessUnavailable,
  MembershipRequired,
  NoMetadata,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for every library failure; `kind()` drives the
/// CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace idealcalc
