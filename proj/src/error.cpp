#include "simplexgeo/error.hpp"

namespace simplexgeo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::IdenticalIndices: return "IdenticalIndices";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidPermutation: return "InvalidPermutation";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::InvalidPatch: return "InvalidPatch";
    case ErrorKind::NonPositiveCoordinate: return "NonPositiveCoordinate";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::PrereqFailed: return "PrereqFailed";
    case ErrorKind::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace simplexgeo
