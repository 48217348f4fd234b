#ifndef PARROM_ERRORS_HPP
#define PARROM_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "parrom/types.hpp"

namespace parrom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter point outside the box, or coefficient undefined on the box.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Singular shifted system, singular E, and similar breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// E is singular to working precision.
class ConditionError : public NumericError {
 public:
  ConditionError(const std::string& what, double rcond)
      : NumericError(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// A Lyapunov or Sylvester solve failed or produced non-finite entries.
class MatEqFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The quadrature integrand returned a non-finite value.
class IntegrandFailure : public NumericError {
 public:
  IntegrandFailure(const std::string& what, Point at)
      : NumericError(what), at_(std::move(at)) {}
  const Point& at() const { return at_; }

 private:
  Point at_;
};

class InitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace parrom

#endif  // PARROM_ERRORS_HPP
