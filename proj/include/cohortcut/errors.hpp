#pragma once

#include <stdexcept>
#include <string>

namespace cohortcut {

// Invalid generator / experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad arguments to an operation (length mismatch, non power-of-two, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds what a backend can do, e.g. exact enumeration on a large graph.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Disease parameters cannot be derived (average degree of zero).
class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Initial infected count rounds to zero.
class SeedingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system or parse failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cohortcut
