#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simplexgeo {

enum class ErrorKind {
  NonPositiveWeight,
  NotNormalized,
  NotTangent,
  OutOfRange,
  IndexOutOfRange,
  IdenticalIndices,
  DimensionMismatch,
  InvalidPermutation,
  InvalidPartition,
  InvalidPatch,
  NonPositiveCoordinate,
  DegenerateDenominator,
  NegativeValue,
  PrereqFailed,
  InfeasibleConstraints,
  EmptySample,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit code.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace simplexgeo
