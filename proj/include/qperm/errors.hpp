#pragma once

#include <stdexcept>
#include <string>

namespace qperm {

/// Invalid or inconsistent parameters (size mismatch, malformed spec, missing flag).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation or theorem.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Enumeration cap, simulator capacity, query budget, or attempt cap exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's stated precondition on its state.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qperm
