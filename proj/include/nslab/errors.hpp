#ifndef NSLAB_ERRORS_HPP_
#define NSLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nslab {

// Every failure raised by the library derives from Error; the C API maps the
// concrete type onto an nslab_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (e.g. negative density).
class DomainError : public Error {
 public:
  using Error::Error;
};

// P'' and friends at vacuum when the exponent makes them blow up.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration; `invariant()` names the violated rule.
class ConfigError : public Error {
 public:
  ConfigError(std::string invariant, const std::string& what)
      : Error(invariant + ": " + what), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

// Estimator hypotheses (mass lower bound etc.) that do not hold for the input.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Mollifier width too small for the sampling lattice.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Density fell below half the vacuum floor during a run.
class VacuumError : public Error {
 public:
  using Error::Error;
};

// Non-finite samples or other numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nslab

#endif  // NSLAB_ERRORS_HPP_
