#pragma once

#include <stdexcept>
#include <string>

namespace qwk {

/// Base class for all qwk errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (wrong layout, unparseable field, empty mandatory file).
struct FormatError : Error {
  using Error::Error;
};

/// Structurally well-formed input that violates a documented invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Cross-referenced data is inconsistent (dangling ids, dimension mismatch).
struct IntegrityError : Error {
  using Error::Error;
};

/// An operation that requires a connected graph received a disconnected one.
struct ConnectivityError : Error {
  using Error::Error;
};

/// Input too small for the operation to be meaningful (e.g. n < 2).
struct DegenerateInputError : Error {
  using Error::Error;
};

}  // namespace qwk
