#pragma once

#include <stdexcept>
#include <string>

namespace hadamard {

// Raised for violated preconditions and class invariants. The CLI maps it to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hadamard
