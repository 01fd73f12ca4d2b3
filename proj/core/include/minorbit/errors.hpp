#pragma once

#include <stdexcept>
#include <string>

namespace minorbit {

// Precondition violations on argument values (parameters outside their
// admissible range, points outside the space, empty inputs).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sequence or environment window is shorter than the operation needs.
class LengthError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An iterative numerical procedure failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A root finder saw no sign change on its bracket.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Slope fitting had too few usable points.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request would exceed a fixed resource ceiling (enumeration size, memory).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minorbit
