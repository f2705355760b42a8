#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fbmlt {

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;
  bool exact = false;
};

/// Two-sample Kolmogorov-Smirnov test. Exact null distribution (lattice-path
/// recursion) when both samples have fewer than 1000 points, the asymptotic
/// Kolmogorov law with Stephens' correction otherwise.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS against a continuous CDF (asymptotic p-value).
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// P(D_{m,n} < d) for the two-sided two-sample statistic, no ties.
double smirnov_cdf_exact(double d, std::size_t m, std::size_t n);
/// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Linear-interpolation quantile (type 7). Copies and partially sorts.
double quantile(std::span<const double> x, double q);
/// Quantile of an already sorted sample.
double sorted_quantile(std::span<const double> sorted, double q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Lag-k sample autocorrelation.
double autocorrelation(std::span<const double> x, std::size_t lag);

}  // namespace fbmlt
