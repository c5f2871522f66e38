#pragma once

#include <stdexcept>
#include <string>

namespace maxmin {

// Base of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInstanceError : public Error {
 public:
  EmptyInstanceError() : Error("empty instance: cloudlet and VM lists must be non-empty") {}
};

// Malformed workload text (DAX, CSV). Carries the 1-based line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

class DescriptorError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Decision list does not cover the instance exactly once.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class UnknownIdError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class DominanceViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace maxmin
