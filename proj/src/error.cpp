#include "physnet/error.hpp"

namespace physnet {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::GraphTooLargeForOracle: return "GraphTooLargeForOracle";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotMetzler: return "NotMetzler";
    case ErrorCode::NotDiagonallyDominant: return "NotDiagonallyDominant";
    case ErrorCode::DisconnectedInput: return "DisconnectedInput";
    case ErrorCode::NumericallyIndeterminate: return "NumericallyIndeterminate";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::NoSpanningTree: return "NoSpanningTree";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::ZeroSigmaEntry: return "ZeroSigmaEntry";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::NoInverseProvided: return "NoInverseProvided";
    case ErrorCode::BracketingFailed: return "BracketingFailed";
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::NotControllable: return "NotControllable";
    case ErrorCode::DimensionChainBroken: return "DimensionChainBroken";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::OutOfEntropyDomain: return "OutOfEntropyDomain";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

StatusClass status_class(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::SelfLoop:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::NonPositiveMass:
    case ErrorCode::DimensionChainBroken:
      return StatusClass::Parse;
    case ErrorCode::NotStronglyConnected:
    case ErrorCode::DisconnectedInput:
    case ErrorCode::NoSpanningTree:
    case ErrorCode::NotBalanced:
    case ErrorCode::NotMetzler:
    case ErrorCode::NotDiagonallyDominant:
    case ErrorCode::ZeroSigmaEntry:
      return StatusClass::Structure;
    case ErrorCode::NonFiniteState:
    case ErrorCode::NumericallyIndeterminate:
    case ErrorCode::BracketingFailed:
    case ErrorCode::NotStrictlyConvex:
    case ErrorCode::OutOfEntropyDomain:
      return StatusClass::Numeric;
    case ErrorCode::NotControllable:
      return StatusClass::Controllability;
    case ErrorCode::NoInverseProvided:
      return StatusClass::SpecIncomplete;
    case ErrorCode::InvalidArgument:
    case ErrorCode::GraphTooLargeForOracle:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::LevelOutOfRange:
      return StatusClass::Argument;
  }
  return StatusClass::Argument;
}

}  // namespace physnet
