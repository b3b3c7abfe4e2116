#pragma once

#include <stdexcept>
#include <string>

namespace fivmon {

// Raised when caller-supplied data or parameters violate a precondition
// (bad record, out-of-range index, malformed file). The CLI maps it to exit 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when the inputs are valid but the analysis has nothing to work with
// (e.g. no dominant component in a search range).
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fivmon
