#pragma once

#include <stdexcept>
#include <string>

namespace scenecal {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: empty lists, out-of-range parameters, malformed records.
class InputError : public Error {
public:
  using Error::Error;
};

/// Malformed file or JSON content. The message carries the offending
/// location (line number or field path) when known.
class ParseError : public InputError {
public:
  using InputError::InputError;
};

/// File system failure (missing file, unreadable path).
class IoError : public Error {
public:
  using Error::Error;
};

/// Geometric degeneracy: a ray parallel to the target plane, a projection
/// with vanishing depth, a rank-deficient system, or a solution that is
/// physically impossible (camera below head height).
class GeometryError : public Error {
public:
  using Error::Error;
};

/// ROC construction was asked to rank a set that contains only positives or
/// only negatives.
class SingleClassError : public Error {
public:
  using Error::Error;
};

}  // namespace scenecal
