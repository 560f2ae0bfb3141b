#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biconf {

// A value left the domain of the operation applied to it (log of a
// non-positive number, division by zero, non-finite jet component, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometric precondition failure at a point: rank loss, frame breakdown,
// point outside the chart, metric not positive definite.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (unknown scenario, bad flag combination).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUnknownIdentifier, kArity };

  ParseError(Kind kind, std::size_t offset, const std::string& message)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

}  // namespace biconf
