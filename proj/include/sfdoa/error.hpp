#pragma once

#include <stdexcept>
#include <string>

namespace sfdoa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, e.g. "shape" or "rooting".
  virtual const char* kind() const noexcept { return "error"; }
};

class ShapeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "shape"; }
};

class ArgumentError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "argument"; }
};

class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}
  const char* kind() const noexcept override { return "conditioning"; }
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, long pivot)
      : Error(what), pivot_(pivot) {}
  const char* kind() const noexcept override { return "factorization"; }
  /// Zero-based index of the first non-positive pivot.
  long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "generation"; }
};

class DegenerateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate"; }
};

class RootingError : public Error {
 public:
  RootingError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  const char* kind() const noexcept override { return "rooting"; }
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

class SolverError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "solver"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}
  const char* kind() const noexcept override { return "io"; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace sfdoa
