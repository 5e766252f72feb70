#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finslab {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside a profile or metric domain, degenerate geometry,
// sampling exhaustion. CLI exit code 3.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Jet algebra violations: singular division, sqrt/log of a non-positive
// constant term, untracked derivative orders, mismatched spaces.
class JetError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class ConfigCode {
  unknown_metric,
  bad_expression,
  bad_dimension,
  bad_samples,
  bad_r_range,
  bad_tolerance,
  bad_constant,
  bad_suite,
  bad_format,
  bad_field,
  missing_field,
  io_error,
};

const char* to_string(ConfigCode code);

// Invalid run configuration or CLI usage. CLI exit code 2.
class ConfigError : public Error {
 public:
  ConfigError(ConfigCode code, const std::string& what)
      : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ConfigCode code() const { return code_; }

 private:
  ConfigCode code_;
};

// Expression syntax error; carries the 0-based offset of the offending token.
class ParseError : public ConfigError {
 public:
  ParseError(std::size_t position, const std::string& what)
      : ConfigError(ConfigCode::bad_expression,
                    what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace finslab
