#include "fbmlt/special.hpp"

#include "fbmlt/errors.hpp"

#include <cmath>

namespace fbmlt {

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_fn: arguments must be positive");
  return std::beta(a, b);
}

double c_h_constant(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("c_h_constant: H must lie in (0,1)");
  return std::sqrt(2.0 * hurst) * std::pow(2.0, hurst) / std::sqrt(beta_fn(1.0 - hurst, hurst + 0.5));
}

}  // namespace fbmlt
