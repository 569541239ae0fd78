#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poqsim {

// Base for all pipeline errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input content violates a schema or an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A required input file is absent or unreadable.
class MissingInputError : public Error {
 public:
  using Error::Error;
};

// Validation failure tied to a specific line of a JSONL file.
class LoadError : public ValidationError {
 public:
  LoadError(std::string path, std::size_t line, const std::string& message)
      : ValidationError(path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace poqsim
