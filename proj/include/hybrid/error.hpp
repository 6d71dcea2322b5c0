#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybrid {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different universes, or carry conflicting atom definitions.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Checked integer overflow, division by zero.
class ArithmeticError : public Error {
  public:
    using Error::Error;
};

class ReducibilityError : public Error {
  public:
    using Error::Error;
};

/// A parameter needed for evaluation is missing from the valuation.
class ValuationError : public Error {
  public:
    using Error::Error;
};

/// A function atom without a body was asked for a scalar value.
class OpacityError : public Error {
  public:
    using Error::Error;
};

/// Residual exponents that the star operation cannot interpret.
class NonEvaluable : public Error {
  public:
    using Error::Error;
};

class ContractError : public Error {
  public:
    using Error::Error;
};

class UnimodularityError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class RefinementError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace hybrid
