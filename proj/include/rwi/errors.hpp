#pragma once

#include <stdexcept>
#include <string>

namespace rwi {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RejectionBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when two routes that must agree exactly produce different
// coefficients; the message names the first differing term.
struct MismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegreeBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rwi
