#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace czlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> partial, double estimate,
                   std::string worst = {})
      : Error(what), partial_(partial), estimate_(estimate), worst_(std::move(worst)) {}

  std::complex<double> partial() const { return partial_; }
  double estimate() const { return estimate_; }
  const std::string& worst_cell() const { return worst_; }

 private:
  std::complex<double> partial_;
  double estimate_;
  std::string worst_;
};

// Raised when the flatness ladder never reaches {0}.
class FiniteTypeError : public Error {
 public:
  using Error::Error;
};

class OrientationError : public Error {
 public:
  using Error::Error;
};

class ConvexityError : public Error {
 public:
  using Error::Error;
};

class NormalFormError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class DegenerateDirectionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfigError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class MisuseError : public Error {
 public:
  using Error::Error;
};

}  // namespace czlab
