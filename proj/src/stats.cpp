#include "fbmlt/stats.hpp"

#include "fbmlt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace fbmlt {

namespace {

constexpr std::size_t kExactKsLimit = 1000;

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

double asymptotic_p(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges slowly here and Q(0.2) = 1 - 6e-22
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double smirnov_cdf_exact(double d, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw DomainError("smirnov_cdf_exact: empty sample");
  if (m > n) std::swap(m, n);
  const auto md = static_cast<double>(m);
  const auto nd = static_cast<double>(n);
  // Lattice-path count of paths staying strictly inside |i/m - j/n| < d, with
  // the binomial normalization folded in step by step to avoid overflow.
  const double q = (0.5 + std::floor(d * md * nd - 1e-7)) / (md * nd);
  std::vector<double> u(n + 1);
  for (std::size_t j = 0; j <= n; ++j) u[j] = (static_cast<double>(j) / nd > q) ? 0.0 : 1.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(i + n);
    u[0] = (static_cast<double>(i) / md > q) ? 0.0 : w * u[0];
    for (std::size_t j = 1; j <= n; ++j) {
      if (std::abs(static_cast<double>(i) / md - static_cast<double>(j) / nd) > q) {
        u[j] = 0.0;
      } else {
        u[j] = w * u[j] + u[j - 1];
      }
    }
  }
  return std::clamp(u[n], 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const auto xs = sorted_copy(a);
  const auto ys = sorted_copy(b);
  const auto na = static_cast<double>(xs.size());
  const auto nb = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult out;
  out.statistic = d;
  if (d == 0.0) {
    out.p_value = 1.0;
    out.exact = true;
    return out;
  }
  if (xs.size() < kExactKsLimit && ys.size() < kExactKsLimit) {
    out.exact = true;
    out.p_value = std::clamp(1.0 - smirnov_cdf_exact(d, xs.size(), ys.size()), 0.0, 1.0);
  } else {
    out.p_value = asymptotic_p(d, na * nb / (na + nb));
  }
  return out;
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
  const auto xs = sorted_copy(sample);
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, asymptotic_p(d, n), false};
}

double normal_cdf(double x, double mean, double sd) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); }

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance: need at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: level must lie in [0,1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> x, double q) { return sorted_quantile(sorted_copy(x), q); }

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares: need two or more paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericalError("least_squares: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
  if (x.size() <= lag + 1) throw DomainError("autocorrelation: sample too short");
  const double m = mean(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i + lag < x.size()) num += (x[i] - m) * (x[i + lag] - m);
  }
  return num / den;
}

}  // namespace fbmlt
