#pragma once

#include <stdexcept>
#include <string>

namespace sdc {

/// Subsystem dimensions that do not fit together, or exceed the supported size.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric parameter outside its admissible range. `parameter()` names it.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string parameter, const std::string& what)
      : std::invalid_argument(parameter + ": " + what), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// support(rho) is not contained in support(sigma); the relative entropy is infinite.
class SupportViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A multiparty correlation pattern whose probability table does not normalize.
class UnsupportedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Matrix that fails a structural requirement (Hermiticity, unit trace, positivity, ...).
class InvalidMatrix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sdc
