#pragma once

#include <stdexcept>
#include <string>

namespace afra {

// Bad configuration values (out-of-range knobs, inconsistent sizes).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent data (unresolved ids, negative recency, empty composites).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor dimension mismatches.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lookup ids outside their vocabulary.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed input files; message carries file name and line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN/Inf escaped a numeric computation.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace afra
