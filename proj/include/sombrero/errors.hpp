#pragma once

#include <stdexcept>
#include <string>

namespace sombrero {

/// Raised when a physical or numerical parameter lies outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation cannot produce a finite, trustworthy result
/// (non-decaying weight, overflow in the outer integrand, a pole that does
/// not cancel, an empty bisection bracket, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sombrero
