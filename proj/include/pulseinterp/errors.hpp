#pragma once

#include <stdexcept>

namespace pulseinterp {

/// A query point lies outside the gate-family domain or the mesh hull.
class OutOfDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point set admits no full-dimensional simplex.
class DegenerateMeshError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed, truncated or wrong-version landscape file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pulseinterp
