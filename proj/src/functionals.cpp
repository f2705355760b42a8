#include "fbmlt/functionals.hpp"

#include "fbmlt/errors.hpp"
#include "fbmlt/stats.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

namespace fbmlt {

namespace {

constexpr double kGaussianReach = 40.0;

double gaussian_cdf_mass(double center, double width, Interval iv) {
  const double s = width * std::numbers::sqrt2;
  return 0.5 * (std::erf((iv.hi - center) / s) - std::erf((iv.lo - center) / s));
}

/// Antiderivative of (1 - y^2)^2 = y - 2y^3/3 + y^5/5 on [-1, 1].
double biweight_primitive(double y) {
  y = std::clamp(y, -1.0, 1.0);
  const double y2 = y * y;
  return y - 2.0 * y * y2 / 3.0 + y * y2 * y2 / 5.0;
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

TestFunction::TestFunction(TestFunctionId id, std::vector<double> params) : id_(id), params_(std::move(params)) {
  const auto& p = params_;
  switch (id_) {
    case TestFunctionId::GaussianBump:
      require(p.size() == 3 && p[2] > 0.0, "gaussian_bump needs {amplitude, center, width>0}");
      f_bar_ = p[0] * p[2] * std::sqrt(2.0 * std::numbers::pi);
      break;
    case TestFunctionId::CompactBump:
      require(p.size() == 3 && p[2] > 0.0, "compact_bump needs {amplitude, center, radius>0}");
      f_bar_ = p[0] * p[2] * 16.0 / 15.0;
      break;
    case TestFunctionId::IndicatorInterval:
      require(p.size() == 3 && p[2] > p[1], "indicator needs {amplitude, lo, hi>lo}");
      f_bar_ = p[0] * (p[2] - p[1]);
      break;
    case TestFunctionId::SignedDifference:
      require(p.size() == 4 && p[2] > 0.0 && p[3] > 0.0 && p[2] != p[3],
              "signed_difference needs {amplitude, center, w1>0, w2>0, w1!=w2}");
      f_bar_ = 0.0;
      break;
  }
}

TestFunction TestFunction::gaussian_bump(double amplitude, double center, double width) {
  return TestFunction(TestFunctionId::GaussianBump, {amplitude, center, width});
}
TestFunction TestFunction::compact_bump(double amplitude, double center, double radius) {
  return TestFunction(TestFunctionId::CompactBump, {amplitude, center, radius});
}
TestFunction TestFunction::indicator(double amplitude, double lo, double hi) {
  return TestFunction(TestFunctionId::IndicatorInterval, {amplitude, lo, hi});
}
TestFunction TestFunction::signed_difference(double amplitude, double center, double w1, double w2) {
  return TestFunction(TestFunctionId::SignedDifference, {amplitude, center, w1, w2});
}

double TestFunction::operator()(double x) const {
  const auto& p = params_;
  switch (id_) {
    case TestFunctionId::GaussianBump: {
      const double z = (x - p[1]) / p[2];
      return p[0] * std::exp(-0.5 * z * z);
    }
    case TestFunctionId::CompactBump: {
      const double y = (x - p[1]) / p[2];
      if (std::abs(y) >= 1.0) return 0.0;
      const double q = 1.0 - y * y;
      return p[0] * q * q;
    }
    case TestFunctionId::IndicatorInterval:
      return (p[1] <= x && x <= p[2]) ? p[0] : 0.0;
    case TestFunctionId::SignedDifference: {
      const double z1 = (x - p[1]) / p[2];
      const double z2 = (x - p[1]) / p[3];
      const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      return p[0] * norm * (std::exp(-0.5 * z1 * z1) / p[2] - std::exp(-0.5 * z2 * z2) / p[3]);
    }
  }
  return 0.0;
}

double TestFunction::mass(Interval iv) const {
  const auto& p = params_;
  if (!(iv.hi > iv.lo)) return 0.0;
  switch (id_) {
    case TestFunctionId::GaussianBump:
      return f_bar_ * gaussian_cdf_mass(p[1], p[2], iv);
    case TestFunctionId::CompactBump:
      return p[0] * p[2] * (biweight_primitive((iv.hi - p[1]) / p[2]) - biweight_primitive((iv.lo - p[1]) / p[2]));
    case TestFunctionId::IndicatorInterval: {
      const double lo = std::max(iv.lo, p[1]);
      const double hi = std::min(iv.hi, p[2]);
      return hi > lo ? p[0] * (hi - lo) : 0.0;
    }
    case TestFunctionId::SignedDifference:
      return p[0] * (gaussian_cdf_mass(p[1], p[2], iv) - gaussian_cdf_mass(p[1], p[3], iv));
  }
  return 0.0;
}

Interval TestFunction::support() const {
  const auto& p = params_;
  switch (id_) {
    case TestFunctionId::GaussianBump:
      return {p[1] - kGaussianReach * p[2], p[1] + kGaussianReach * p[2]};
    case TestFunctionId::CompactBump:
      return {p[1] - p[2], p[1] + p[2]};
    case TestFunctionId::IndicatorInterval:
      return {p[1], p[2]};
    case TestFunctionId::SignedDifference: {
      const double w = std::max(p[2], p[3]);
      return {p[1] - kGaussianReach * w, p[1] + kGaussianReach * w};
    }
  }
  return {};
}

double TestFunction::k_moment(double k) const {
  if (!(k >= 0.0)) throw DomainError("k_moment: k must be non-negative");
  if (id_ == TestFunctionId::IndicatorInterval) {
    auto primitive = [k](double x) { return std::copysign(std::pow(std::abs(x), k + 1.0), x) / (k + 1.0); };
    return std::abs(params_[0]) * (primitive(params_[2]) - primitive(params_[1]));
  }
  const Interval sup = support();
  auto integrand = [&](double x) { return std::pow(std::abs(x), k) * std::abs((*this)(x)); };
  // Split at the kinks of |x|^k and at the center so each piece is smooth.
  std::vector<double> cuts{sup.lo, sup.hi, params_[1]};
  if (sup.lo < 0.0 && 0.0 < sup.hi) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-12);
  }
  return total;
}

std::string to_string(TestFunctionId id) {
  switch (id) {
    case TestFunctionId::GaussianBump: return "gaussian_bump";
    case TestFunctionId::CompactBump: return "compact_bump";
    case TestFunctionId::IndicatorInterval: return "indicator_interval";
    case TestFunctionId::SignedDifference: return "signed_difference";
  }
  return "unknown";
}

TestFunctionId parse_test_function_id(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "gaussian_bump") return TestFunctionId::GaussianBump;
  if (s == "compact_bump") return TestFunctionId::CompactBump;
  if (s == "indicator_interval" || s == "indicator") return TestFunctionId::IndicatorInterval;
  if (s == "signed_difference") return TestFunctionId::SignedDifference;
  throw DomainError("unknown test function: " + std::string(text));
}

double functional(const PathGrid& path, const TestFunction& f, double t) {
  if (t > path.spec.horizon * (1.0 + 1e-12)) throw DomainError("functional: t beyond the path horizon");
  const std::size_t last = time_index(path, t);
  if (last == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double w = (i == 0 || i == last) ? 0.5 : 1.0;
    acc += w * f(path.values(static_cast<Eigen::Index>(i)));
  }
  return path.dt() * acc;
}

ResidualSeries residual_series(const PathGrid& path, const TestFunction& f, const Eigen::VectorXd& t_grid,
                               double lt_bandwidth, bool negative_control) {
  if (f.f_bar() == 0.0 && !negative_control)
    throw DomainError("residual_series: f_bar must be non-zero outside negative-control mode");
  if (!(lt_bandwidth > 0.0)) throw DomainError("residual_series: bandwidth must be positive");
  if (!std::is_sorted(t_grid.data(), t_grid.data() + t_grid.size()))
    throw DomainError("residual_series: t_grid must be sorted");

  ResidualSeries out;
  out.t_grid = t_grid;
  out.tau = path.spec.tau;
  out.residual = Eigen::VectorXd::Zero(t_grid.size());
  if (t_grid.size() == 0) return out;

  const double dt = path.dt();
  const double eps = lt_bandwidth;
  auto f_at = [&](std::size_t i) { return f(path.values(static_cast<Eigen::Index>(i))); };
  auto near_zero = [&](std::size_t i) {
    const double v = path.values(static_cast<Eigen::Index>(i));
    return (-eps <= v && v <= eps) ? 1.0 : 0.0;
  };
  const double f0 = f_at(0);
  const double o0 = near_zero(0);
  double f_sum = 0.0;
  double o_sum = 0.0;
  std::size_t i = 0;
  for (Eigen::Index j = 0; j < t_grid.size(); ++j) {
    const std::size_t last = time_index(path, t_grid(j));
    for (; i <= last; ++i) {
      f_sum += f_at(i);
      o_sum += near_zero(i);
    }
    if (last == 0) continue;
    const double integral = dt * (f_sum - 0.5 * f0 - 0.5 * f_at(last));
    const double lt = dt * (o_sum - 0.5 * o0 - 0.5 * near_zero(last)) / (2.0 * eps);
    out.residual(j) = integral - f.f_bar() * lt;
  }
  return out;
}

ResidualSplit residual_split(const LocalTimeField& field, const TestFunction& f, double t, double l0, double nu,
                             double k) {
  if (!(nu > 0.0 && k > 0.0)) throw DomainError("residual_split: nu and k must be positive");
  const double tau = field.source_spec.tau;
  ResidualSplit out;
  const double a = nu * tau / (nu + k);
  out.threshold = std::pow(t, a);
  const Eigen::Index col = field.time_column(t);
  const double dx = field.dx();
  const Eigen::Index levels = field.x_grid.size();
  double inner_sum = 0.0;
  double outer_sum = 0.0;
  for (Eigen::Index j = 0; j < levels; ++j) {
    const double x = field.x_grid(j);
    const double w = (j == 0 || j == levels - 1) ? 0.5 : 1.0;
    const double term = w * dx * f(x) * field.values(j, col);
    if (std::abs(x) <= out.threshold) {
      inner_sum += term;
    } else {
      outer_sum += term;
    }
  }
  const double inner_mass = f.mass({-out.threshold, out.threshold});
  out.inner = inner_sum - l0 * inner_mass;
  out.outer = outer_sum - l0 * (f.f_bar() - inner_mass);
  return out;
}

RateFit rate_regression(const std::vector<ResidualSeries>& series, Interval window, double quantile_level,
                        std::size_t bootstrap, std::uint64_t seed) {
  if (series.size() < 50) throw DomainError("rate_regression: need at least 50 replicates");
  if (!(window.lo > 0.0) || !(window.hi >= 10.0 * window.lo))
    throw DomainError("rate_regression: degenerate window (must span at least one decade of t > 0)");
  const Eigen::VectorXd& grid = series.front().t_grid;
  for (const auto& s : series) {
    if (s.t_grid.size() != grid.size()) throw DomainError("rate_regression: replicates must share a time grid");
  }
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    if (grid(j) >= window.lo * (1.0 - 1e-12) && grid(j) <= window.hi * (1.0 + 1e-12)) cols.push_back(j);
  }
  if (cols.size() < 3) throw DomainError("rate_regression: fewer than three times inside the window");

  const std::size_t reps = series.size();
  std::vector<double> log_t(cols.size());
  std::vector<std::vector<double>> magnitude(cols.size(), std::vector<double>(reps));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    log_t[c] = std::log(grid(cols[c]));
    for (std::size_t r = 0; r < reps; ++r) magnitude[c][r] = std::abs(series[r].residual(cols[c]));
  }

  auto fit = [&](const std::vector<std::size_t>* picks) {
    std::vector<double> log_q(cols.size());
    std::vector<double> sample(reps);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (std::size_t r = 0; r < reps; ++r) sample[r] = magnitude[c][picks ? (*picks)[r] : r];
      const double q = quantile(sample, quantile_level);
      if (!(q > 0.0)) throw NumericalError("rate_regression: zero quantile inside the window");
      log_q[c] = std::log(q);
    }
    return least_squares(log_t, log_q);
  };

  const LineFit base = fit(nullptr);
  RateFit out;
  out.slope = base.slope;
  out.intercept = base.intercept;
  out.points = cols.size();
  out.ci_lo = out.ci_hi = base.slope;
  if (bootstrap == 0) return out;

  std::mt19937_64 engine(seed);
  std::vector<double> slopes(bootstrap);
  std::vector<std::size_t> picks(reps);
  for (std::size_t b = 0; b < bootstrap; ++b) {
    for (auto& p : picks) p = static_cast<std::size_t>(engine() % reps);
    slopes[b] = fit(&picks).slope;
  }
  std::sort(slopes.begin(), slopes.end());
  out.ci_lo = sorted_quantile(slopes, 0.025);
  out.ci_hi = sorted_quantile(slopes, 0.975);
  return out;
}

}  // namespace fbmlt
