#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace szl {

enum class ErrorKind {
  InvalidPartition,
  DisconnectedGraph,
  InvalidParams,
  SinkVertex,
  NotLumpable,
  NotEquitable,
  InvalidChain,
  NotStochastic,
  DimensionMismatch,
  UnknownVertex,
  ArcNotInBasis,
  BasisTooLarge,
  InconsistentConstraints,
  NormalizationImpossible,
  BasisMismatch,
  NotUnit,
  NotCoinInvariant,
  InvalidSequence,
  NotCmvShaped,
  DegenerateChain,
  InconsistentR,
  NegativeRadicand,
  NotDensity,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every module. The kind is stable and is what the
/// CLI reports; the message carries the witness in human-readable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace szl
