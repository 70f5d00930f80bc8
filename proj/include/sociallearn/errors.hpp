#pragma once

#include <stdexcept>
#include <string>

namespace sociallearn {

// Shape or metadata mismatch between operands. Structural: distinct from
// value-level constraint violations, which validators report as data.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scalar or vector argument outside its documented domain.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is structurally fine but numerically unusable (no resolvable
// minimizer, singular inner matrix, ...).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested computation exceeds a configured size budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sociallearn
