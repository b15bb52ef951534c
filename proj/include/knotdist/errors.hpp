#pragma once

#include <stdexcept>
#include <string>

namespace knotdist {

// Exception families map one-to-one onto CLI exit codes (2, 3, 4).

/// Malformed input text (curve files, config files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geometric precondition failed: degenerate or self-intersecting curve,
/// coincident points, tiles that collide.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace knotdist
