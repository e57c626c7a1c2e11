#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace zeropack {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRegionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class InvalidLatticeError : public Error {
 public:
  using Error::Error;
};

class UndefinedScaleError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A non-finite integrand value; carries the quadrature node where it occurred.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::complex<double> node)
      : Error(what), node_(node) {}
  std::complex<double> node() const { return node_; }

 private:
  std::complex<double> node_;
};

}  // namespace zeropack
