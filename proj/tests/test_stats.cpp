#include "fbmlt/errors.hpp"
#include "fbmlt/rng.hpp"
#include "fbmlt/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fbmlt;

namespace {

// Two-sample KS distance straight from the definition, no ties assumed.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  double d = 0.0;
  for (double v : pooled) {
    const double fa = std::count_if(a.begin(), a.end(), [&](double x) { return x <= v; }) / double(a.size());
    const double fb = std::count_if(b.begin(), b.end(), [&](double x) { return x <= v; }) / double(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Null distribution by enumerating every split of ranks 0..m+n-1.
double enumerated_p(double d_obs, int m, int n) {
  int hits = 0;
  int total = 0;
  const int all = m + n;
  for (unsigned mask = 0; mask < (1u << all); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < all; ++i) ((mask >> i) & 1u ? a : b).push_back(i);
    ++total;
    if (ks_distance(a, b) >= d_obs - 1e-12) ++hits;
  }
  return double(hits) / total;
}

}  // namespace

TEST_CASE("exact two-sample KS matches full enumeration") {
  for (auto [m, n] : {std::pair{5, 5}, std::pair{4, 7}, std::pair{6, 3}}) {
    for (int shift = 0; shift <= 4; ++shift) {
      std::vector<double> a;
      std::vector<double> b;
      for (int i = 0; i < m; ++i) a.push_back(2.0 * i + 0.5 * shift);
      for (int j = 0; j < n; ++j) b.push_back(1.7 * j + 0.01);
      const auto ks = ks_two_sample(a, b);
      CHECK(ks.exact);
      CHECK(ks.statistic == doctest::Approx(ks_distance(a, b)));
      CHECK(ks.p_value == doctest::Approx(enumerated_p(ks.statistic, m, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("asymptotic branch and the Kolmogorov law") {
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  NormalStream z(3);
  std::vector<double> a(1500);
  std::vector<double> b(1200);
  for (double& v : a) v = z();
  for (double& v : b) v = z();
  const auto same = ks_two_sample(a, b);
  CHECK_FALSE(same.exact);
  CHECK(same.p_value > 0.01);
  for (double& v : b) v += 0.3;
  CHECK(ks_two_sample(a, b).p_value < 1e-6);
  CHECK(ks_one_sample(a, [](double x) { return normal_cdf(x); }).p_value > 0.01);
  CHECK(ks_one_sample(a, [](double x) { return normal_cdf(x, 0.5); }).p_value < 1e-6);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, b), DomainError);
}

TEST_CASE("quantiles, moments and least squares") {
  const std::vector<double> x{3.0, 1.0, 4.0, 1.5, 9.0};
  CHECK(quantile(x, 0.0) == 1.0);
  CHECK(quantile(x, 1.0) == 9.0);
  CHECK(quantile(x, 0.5) == 3.0);
  CHECK(quantile(x, 0.9) == doctest::Approx(4.0 + 0.6 * 5.0));
  CHECK(mean(x) == doctest::Approx(3.7));
  CHECK(variance(x) == doctest::Approx((0.49 + 7.29 + 0.09 + 4.84 + 28.09) / 4.0));
  CHECK_THROWS_AS(quantile(x, 1.5), DomainError);
  const std::vector<double> u{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const auto fit = least_squares(u, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK_THROWS_AS(least_squares(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 1.0}), NumericalError);
  const std::vector<double> alt{1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
  CHECK(autocorrelation(alt, 1) < -0.8);
}
