#pragma once

// Exception types raised by the library. The CLI maps each family onto a
// process exit code (see tools/imhdc.cpp).

#include <stdexcept>
#include <string>

namespace imhdc {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidState : std::logic_error {
  using std::logic_error::logic_error;
};

struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct EncodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or malformed input data.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model file and run configuration disagree, or the configuration is invalid.
struct ConfigMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A checked internal invariant did not hold.
struct InvariantBreach : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace imhdc
