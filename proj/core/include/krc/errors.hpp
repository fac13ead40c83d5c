#ifndef KRC_ERRORS_HPP
#define KRC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace krc {

// Base class for all library errors. Input-shaped problems (bad measures,
// mismatched spaces, malformed tables) derive from InputError; failures of a
// mathematical guarantee derive from MathError. The CLI maps the two families
// to distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

struct NegativeMass : InputError {
  using InputError::InputError;
};
struct NotNormalized : InputError {
  using InputError::InputError;
};
struct SpaceMismatch : InputError {
  using InputError::InputError;
};
struct ShapeMismatch : InputError {
  using InputError::InputError;
};
struct WeightMismatch : InputError {
  using InputError::InputError;
};
struct IndexOutOfRange : InputError {
  using InputError::InputError;
};
struct NotStochastic : InputError {
  using InputError::InputError;
};

struct UntightCost : MathError {
  using MathError::MathError;
};
struct NumericalFailure : MathError {
  using MathError::MathError;
};
struct DualityGapExceeded : MathError {
  using MathError::MathError;
};

}  // namespace krc

#endif  // KRC_ERRORS_HPP
