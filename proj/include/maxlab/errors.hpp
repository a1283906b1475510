#pragma once

#include <stdexcept>
#include <string>

namespace maxlab {

// Recoverable, user-facing failures. Anything else (internal invariant
// breaks) throws std::logic_error and is a bug.

struct PreconditionViolated : std::runtime_error {
  explicit PreconditionViolated(const std::string& what) : std::runtime_error(what) {}
};

// Superlevel-set extraction detected (or could not rule out) components
// reaching past the requested window.
struct WindowTooSmall : std::runtime_error {
  explicit WindowTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// A norm over an unbounded region was requested without a usable tail bound.
struct TailNotCertified : std::runtime_error {
  explicit TailNotCertified(const std::string& what) : std::runtime_error(what) {}
};

// An average-equation solve walked off the end of the line.
struct NoSolution : std::runtime_error {
  explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedDimension : std::runtime_error {
  explicit UnsupportedDimension(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files / CLI arguments (exit code 2 territory).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace maxlab
