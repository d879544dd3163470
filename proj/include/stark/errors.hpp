#pragma once

#include <stdexcept>
#include <string>

namespace stark {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input or parameters outside a documented cap.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A formula evaluated outside its domain (e.g. strong-field asymptotics at F = 0).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure: bracketing, convergence, quadrature.
class SolverError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public SolverError {
 public:
  QuadratureError(const std::string& what, double best_estimate)
      : SolverError(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, double best_value, double residual)
      : SolverError(what), best_value_(best_value), residual_(residual) {}
  double best_value() const { return best_value_; }
  double residual() const { return residual_; }

 private:
  double best_value_;
  double residual_;
};

}  // namespace stark
