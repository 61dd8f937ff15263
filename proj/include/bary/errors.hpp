#pragma once

#include <stdexcept>
#include <string>

namespace bary {

// Input document cannot be parsed (bad JSON, bad fraction syntax, unreadable file).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed fine but violates a semantic requirement (negative mass, dim mismatch, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configurable size cap would be exceeded (tuple count, LP variable count, ...).
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Floating-point solve lost too much accuracy and refactorization did not recover.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation defined only for a specific dimensionality (plotting needs d = 2).
struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace bary
