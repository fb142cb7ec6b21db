#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace countlab {

// A caller broke a documented precondition (bad arity, partial assignment,
// out-of-range constant, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Structural problem in a formula or circuit under construction.
class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A class spec was asked to judge a profile without the auxiliary
// parameters it needs.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumerating counter refused an instance that exceeds its cap or budget.
class EnumerationRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace countlab
