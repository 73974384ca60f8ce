#include "szl/errors.hpp"

namespace szl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SinkVertex: return "SinkVertex";
    case ErrorKind::NotLumpable: return "NotLumpable";
    case ErrorKind::NotEquitable: return "NotEquitable";
    case ErrorKind::InvalidChain: return "InvalidChain";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::ArcNotInBasis: return "ArcNotInBasis";
    case ErrorKind::BasisTooLarge: return "BasisTooLarge";
    case ErrorKind::InconsistentConstraints: return "InconsistentConstraints";
    case ErrorKind::NormalizationImpossible: return "NormalizationImpossible";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::NotCoinInvariant: return "NotCoinInvariant";
    case ErrorKind::InvalidSequence: return "InvalidSequence";
    case ErrorKind::NotCmvShaped: return "NotCmvShaped";
    case ErrorKind::DegenerateChain: return "DegenerateChain";
    case ErrorKind::InconsistentR: return "InconsistentR";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace szl
