#pragma once

#include <stdexcept>

namespace ltimd {

// Malformed textual input (CSV syntax, headers, empty files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (bad fraction, infeasible
// complexity, depth below the admissible minimum, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Incompatible matrix/signal dimensions.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A missing entry reached an operation that requires complete data.
struct MaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix does not have the rank an operation requires.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-range or colliding index sets.
struct IndexError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The signal carries no usable samples.
struct NoDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The generalized persistency-of-excitation rank condition failed.
struct GpeViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ltimd
