#pragma once

#include <stdexcept>
#include <string>

namespace fbmtopo {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input that is well-formed but carries no usable information (e.g. a constant series).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A random-series generator could not produce a valid sample.
class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guarded computation was asked to handle more data than it allows.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Caller broke an API precondition (unsorted filtration, mismatched diagrams...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbmtopo
