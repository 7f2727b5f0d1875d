#pragma once

#include <stdexcept>
#include <string>

namespace lyap {

/// Invalid input: bad parameters, violated preconditions, malformed files.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (no convergence, inconsistent quadrature).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lyap
