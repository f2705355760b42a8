#pragma once

#include "fbmlt/local_time.hpp"
#include "fbmlt/process.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fbmlt {

enum class TestFunctionId { GaussianBump, CompactBump, IndicatorInterval, SignedDifference };

/// Integrable test function with known total mass f_bar = int f.
///
/// Parameters by family:
///   GaussianBump       {amplitude, center, width}:        A exp(-(x-c)^2 / 2 w^2)
///   CompactBump        {amplitude, center, radius}:       A (1 - ((x-c)/r)^2)^2 on |x-c| < r
///   IndicatorInterval  {amplitude, lo, hi}:               A 1[lo, hi]
///   SignedDifference   {amplitude, center, w1, w2}:       A (phi_w1(x-c) - phi_w2(x-c)), phi_w the N(0,w^2) density
class TestFunction {
 public:
  TestFunction(TestFunctionId id, std::vector<double> params);

  static TestFunction gaussian_bump(double amplitude, double center, double width);
  static TestFunction compact_bump(double amplitude, double center, double radius);
  static TestFunction indicator(double amplitude, double lo, double hi);
  static TestFunction signed_difference(double amplitude, double center, double w1, double w2);

  double operator()(double x) const;
  TestFunctionId id() const { return id_; }
  const std::vector<double>& params() const { return params_; }
  double f_bar() const { return f_bar_; }
  /// int |x|^k |f(x)| dx (analytic for indicators, quadrature otherwise).
  double k_moment(double k) const;
  /// int_I f(x) dx in closed form.
  double mass(Interval interval) const;
  /// Interval outside which f vanishes (or underflows for Gaussians).
  Interval support() const;

 private:
  TestFunctionId id_;
  std::vector<double> params_;
  double f_bar_ = 0.0;
};

std::string to_string(TestFunctionId id);
TestFunctionId parse_test_function_id(std::string_view text);

/// Composite trapezoid of f(X(s_i)) over [0, t] on the path grid.
double functional(const PathGrid& path, const TestFunction& f, double t);

/// J(t) = int_0^t f(X) ds - f_bar L(0, t) on a time grid.
struct ResidualSeries {
  Eigen::VectorXd t_grid;
  Eigen::VectorXd residual;
  double tau = 0.5;
};

/// Prefix sums make this O(n + |t_grid|). Throws DomainError when f_bar == 0
/// unless `negative_control` is set.
ResidualSeries residual_series(const PathGrid& path, const TestFunction& f, const Eigen::VectorXd& t_grid,
                               double lt_bandwidth, bool negative_control = false);

/// Field-based split of f_bar-weighted residual at the threshold |x| = t^a,
/// a = nu tau / (nu + k):  J1 over |x| > t^a and J2 over |x| <= t^a of
/// int f(x) (L(x,t) - L(0,t)) dx, with L(0,t) taken from `l0`.
struct ResidualSplit {
  double threshold = 0.0;
  double outer = 0.0;  // J1
  double inner = 0.0;  // J2
};
ResidualSplit residual_split(const LocalTimeField& field, const TestFunction& f, double t, double l0, double nu,
                             double k);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t points = 0;
};

/// OLS of log(quantile_q |J(t)|) on log t over t in `window`, with a percentile
/// bootstrap (replicates resampled) 95% interval for the slope.
RateFit rate_regression(const std::vector<ResidualSeries>& series, Interval window, double quantile = 0.9,
                        std::size_t bootstrap = 1000, std::uint64_t seed = 0x5eed);

}  // namespace fbmlt
