#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wobble {

enum class ErrorKind {
  NumericalFailure,
  NotPositiveDefinite,
  DimensionMismatch,
  Configuration,
  RankNotFound,
  InfeasibleRequest,
  PreconditionViolation,
  ConstructionFailed,
  SchemeInfeasible,
  InternalConsistency,
  BasisIncomplete,
  EnumerationInfeasible,
  EmbeddingFailure,
  DegenerateWindow,
  TableTooShort,
  Assembly,
  Validation,
  LevelOutOfRange,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // what() without the "<kind>: " prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace wobble
