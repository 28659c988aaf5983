#pragma once

#include <stdexcept>
#include <string>

namespace nlos {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index or coordinate outside a grid or room.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Geometry with no unique solution (coincident or collinear anchors).
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Handshake operation invoked in the wrong session state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Peer sent a value that violates the exchange contract.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration. `field()` names the offending path,
/// e.g. "ultrasonic.receivers".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace nlos
