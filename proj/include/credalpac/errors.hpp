#pragma once

#include <stdexcept>
#include <string>

namespace credalpac {

/// Operands built over different (or out-of-range) domains.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value violates a documented precondition (empty dataset, delta out of range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact enumeration refused because the instance is too large.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Configuration document is malformed or violates an invariant.
/// `where()` is a JSON pointer or a "line N, column M" location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace credalpac
