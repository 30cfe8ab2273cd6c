#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpbog {

// Every error carries the process exit code the CLI maps it to.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const noexcept { return 1; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Violated mathematical precondition (e.g. an indefinite matrix that must be PSD).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Grid too coarse for the requested kernel.
class ResolutionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what + " (last residual " + std::to_string(last_residual) + ")"),
        last_residual_(last_residual) {}
  int exit_code() const noexcept override { return 3; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t required)
      : Error(what + " (required " + std::to_string(required) + ")"), required_(required) {}
  int exit_code() const noexcept override { return 4; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

}  // namespace gpbog
