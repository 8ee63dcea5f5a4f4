#pragma once

#include <stdexcept>
#include <string>

namespace gridwatch {

// Exit-code mapping used by the CLI lives in tools/; the library only throws.

// Bad key, bad value, malformed config file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stage was invoked in a state it refuses to run in (missing dataset,
// overwrite without force, too few windows, manifest mismatch, wired ego...).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values, failed numeric checks.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor/operator shape disagreement.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Math outside an operation's domain (log of a non-positive value, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace gridwatch
