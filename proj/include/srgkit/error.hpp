#pragma once

#include <stdexcept>
#include <string>

namespace srg {

/// Malformed input: bad JSON, dimension mismatch, invalid parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the supplied model, e.g. an
/// unstable LTI block or an unacknowledged well-posedness assumption.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown: singular solve, NaN, divergent algebraic loop.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srg
