#pragma once

#include <stdexcept>

namespace ijack {

// Raised when a quantity that is non-negative by convexity (or an identity that
// holds exactly) comes out wrong by more than floating-point noise. This is a
// bug signal, never an input-validation error.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ijack
