#pragma once

#include <stdexcept>
#include <string>

namespace fbmlt {

/// Argument outside the domain of a formula or a violated precondition.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Factorization failure, indefinite covariance, degenerate regression.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fbmlt
