#include "graphsurf/errors.hpp"

namespace graphsurf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedBase: return "unsupported-base";
    case ErrorKind::InvalidField: return "invalid-field";
    case ErrorKind::LeavesTubularNeighborhood: return "leaves-tubular-neighborhood";
    case ErrorKind::DegenerateGraph: return "degenerate-graph";
    case ErrorKind::ProjectionUndefined: return "projection-undefined";
    case ErrorKind::IncompleteBundle: return "incomplete-bundle";
    case ErrorKind::InvalidExponent: return "invalid-exponent";
    case ErrorKind::ExcludedCase: return "excluded-case";
    case ErrorKind::NoValidExponent: return "no-valid-exponent";
    case ErrorKind::UndefinedRatio: return "undefined-ratio";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::InvalidFamily: return "invalid-family";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::GridTooLarge: return "grid-too-large";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

} // namespace graphsurf
