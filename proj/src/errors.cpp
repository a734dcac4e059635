#include "wobble/errors.hpp"

namespace wobble {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::RankNotFound: return "rank-not-found";
    case ErrorKind::InfeasibleRequest: return "infeasible-request";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::ConstructionFailed: return "construction-failed";
    case ErrorKind::SchemeInfeasible: return "scheme-infeasible";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::BasisIncomplete: return "basis-incomplete";
    case ErrorKind::EnumerationInfeasible: return "enumeration-infeasible";
    case ErrorKind::EmbeddingFailure: return "embedding-failure";
    case ErrorKind::DegenerateWindow: return "degenerate-window";
    case ErrorKind::TableTooShort: return "table-too-short";
    case ErrorKind::Assembly: return "assembly";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::LevelOutOfRange: return "level-out-of-range";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace wobble
