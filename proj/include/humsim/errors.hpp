#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace humsim {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Malformed command line, path spec or fit spec.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Unknown or ill-typed key in a configuration document.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Ill-formed input data; carries the 1-based line number when known.
class DataError : public std::runtime_error {
  public:
    DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// Calibration could not produce a physical answer.
class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace humsim
