#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or a request the input cannot satisfy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input that must be time-ordered was not.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// An empirical measure was requested over too few samples.
class MeasureError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The QP solver hit its iteration cap. Carries the best dual iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> alpha, double rho)
      : Error(what), alpha_(std::move(alpha)), rho_(rho) {}
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double rho() const noexcept { return rho_; }

 private:
  std::vector<double> alpha_;
  double rho_;
};

}  // namespace netad
