// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gweval {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file content. Carries a 1-based line number when known.
// CLI exit status 2.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
  FormatError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  // 0 when no line is associated.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Structurally valid input that violates an operation's domain
// (box outside canvas, missing domain assignment, mismatched image
// sets, ...). CLI exit status 3.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: bad flags, bad config file values, or a stage
// whose requirements the input cannot satisfy. CLI exit status 4.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// One-way ANOVA requested on groups with zero within-group variance.
class DegenerateVarianceError : public InputDomainError {
 public:
  using InputDomainError::InputDomainError;
};

}  // namespace gweval
