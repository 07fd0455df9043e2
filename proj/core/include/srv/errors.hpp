#pragma once

#include <stdexcept>
#include <string>

namespace srv {

// Raised when an operation receives data outside its domain (degenerate
// vectors, malformed CSV, impossible configuration values). The CLI maps
// this to its data-error exit code.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace srv
