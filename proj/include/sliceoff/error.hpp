#ifndef SLICEOFF_ERROR_HPP_
#define SLICEOFF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sliceoff {

// Invalid argument for a cost/model formula (absent EC in slice, zero share on a used resource, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Instance too large for exhaustive enumeration.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed generator / sweep configuration. The message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Best-response dynamics exceeded the iteration cap.
class NonTerminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sliceoff

#endif  // SLICEOFF_ERROR_HPP_
