#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by numerical kernels; carries the matrix size and abscissa when known.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long size = -1, double s = 0.0)
      : std::runtime_error(what), size_(size), s_(s) {}
  long size() const noexcept { return size_; }
  double s() const noexcept { return s_; }

 private:
  long size_;
  double s_;
};

class AnchorPlacementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchFailureError : public NumericalError {
 public:
  BranchFailureError(const std::string& what, int interval, double s_reached)
      : NumericalError(what, -1, s_reached), interval_(interval) {}
  int interval() const noexcept { return interval_; }

 private:
  int interval_;
};

class WindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rmt
