#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gnpn {

enum class ErrorKind {
  NotPositiveDefinite,
  IterationLimit,
  NonPositiveVariance,
  DimensionMismatch,
  InvalidArgument,
  RetriesExhausted,
  DegenerateTree,
  UnknownTransform,
  QuadratureFailure,
  NoDerivativeSequence,
  SeriesDivergence,
  InvalidCovariance,
  DegenerateColumn,
  TooFewSamples,
  SingularCorrelation,
  ApplicabilityFailed,
  NoKnee,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure surfaced by the library carries a kind so callers (and the
// experiment harness) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gnpn
