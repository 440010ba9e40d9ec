#pragma once

#include <stdexcept>
#include <string>

namespace hypervol {

// Base class for all library errors. Subclasses split into two families:
// input/validation problems (the CLI maps these to exit code 2) and
// numerical-check failures (exit code 3).
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};

struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};
struct SizeMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct DegreeMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct DegreeOverflow : ValidationError {
  using ValidationError::ValidationError;
};
struct InsufficientSamples : ValidationError {
  using ValidationError::ValidationError;
};
struct EmptyPolytope : ValidationError {
  using ValidationError::ValidationError;
};
struct TooManyVertices : ValidationError {
  using ValidationError::ValidationError;
};
struct NotAFace : ValidationError {
  using ValidationError::ValidationError;
};
struct NotOrthonormal : ValidationError {
  using ValidationError::ValidationError;
};
struct UnionNotConvex : ValidationError {
  using ValidationError::ValidationError;
};
struct SupportEscapesGrid : ValidationError {
  using ValidationError::ValidationError;
};
struct NotDifferentiable : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateCone : ValidationError {
  using ValidationError::ValidationError;
};

struct PairingBroken : NumericalError {
  using NumericalError::NumericalError;
};
struct PivotFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct CheckFailed : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace hypervol
