#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace resil {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A model or data record violates one of its invariants. `field()` names the
/// offending parameter (or component id for event records).
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Malformed input text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(double best_estimate, double error_bound);

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double best_estimate_;
  double error_bound_;
};

/// Operation requested on the wrong restore-model variant.
class VariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace resil
