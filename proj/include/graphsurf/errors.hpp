#ifndef GRAPHSURF_ERRORS_HPP
#define GRAPHSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphsurf {

/// Error categories raised by the library. Each maps to one failure mode of
/// the geometric construction or of an estimator contract.
enum class ErrorKind {
  UnsupportedBase,
  InvalidField,
  LeavesTubularNeighborhood,
  DegenerateGraph,
  ProjectionUndefined,
  IncompleteBundle,
  InvalidExponent,
  ExcludedCase,
  NoValidExponent,
  UndefinedRatio,
  ConvergenceFailure,
  InvalidFamily,
  UnsupportedOrder,
  GridTooLarge,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace graphsurf

#endif
