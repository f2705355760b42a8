#include "fbmlt/local_time.hpp"

#include "fbmlt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace fbmlt {

namespace {

struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

/// Grid indices with t_i in [lo, hi] clipped to [0, T]; empty if fewer than two.
std::optional<IndexRange> window_indices(const PathGrid& path, double lo, double hi) {
  const double dt = path.dt();
  lo = std::max(lo, 0.0);
  hi = std::min(hi, path.spec.horizon);
  if (!(hi > lo)) return std::nullopt;
  const double plo = lo / dt;
  const double phi = hi / dt;
  const auto first = static_cast<std::size_t>(std::ceil(plo - 1e-9 * std::max(1.0, plo)));
  const auto last = std::min(static_cast<std::size_t>(std::floor(phi + 1e-9 * std::max(1.0, phi))), path.spec.n_steps);
  if (last <= first) return std::nullopt;
  return IndexRange{first, last};
}

/// Trapezoid weight of index i inside [first, last].
double end_weight(std::size_t i, const IndexRange& r) { return (i == r.first || i == r.last) ? 0.5 : 1.0; }

bool is_uniform(const Eigen::VectorXd& grid) {
  if (grid.size() < 3) return true;
  const double step = grid(1) - grid(0);
  for (Eigen::Index i = 1; i + 1 < grid.size(); ++i) {
    if (std::abs((grid(i + 1) - grid(i)) - step) > 1e-9 * std::max(std::abs(step), 1e-300)) return false;
  }
  return true;
}

bool is_sorted(const Eigen::VectorXd& grid) {
  return std::is_sorted(grid.data(), grid.data() + grid.size());
}

/// Discrete Fejer sum du * sum_{|k|<M} (1 - |k|/M) cos(k du d).
double fejer_weight(double d, double du, std::size_t m) {
  const double theta = du * d;
  const double half = std::sin(0.5 * theta);
  const auto md = static_cast<double>(m);
  if (std::abs(half) < 1e-9) return du * md;
  const double num = std::sin(0.5 * md * theta);
  return du * num * num / (md * half * half);
}

std::size_t frequency_half_count(std::size_t n_freq) { return (n_freq + 1) / 2; }

void check_fourier_args(double cutoff, std::size_t n_freq) {
  if (!(cutoff > 0.0)) throw DomainError("Fourier local time: cutoff must be positive");
  if (n_freq < 16) throw DomainError("Fourier local time: n_freq must be at least 16");
}

}  // namespace

Eigen::Index LocalTimeField::time_column(double t) const {
  for (Eigen::Index j = 0; j < t_grid.size(); ++j) {
    if (std::abs(t_grid(j) - t) <= 1e-9 * std::max(1.0, std::abs(t))) return j;
  }
  throw DomainError("local time field: t is not on the field's time grid");
}

OccupationEstimate occupation_time(const PathGrid& path, Interval set, Interval window) {
  OccupationEstimate out{set, window, 0.0};
  const auto range = window_indices(path, window.lo, window.hi);
  if (!range) return out;
  double count = 0.0;
  for (std::size_t i = range->first; i <= range->last; ++i) {
    const double v = path.values(static_cast<Eigen::Index>(i));
    if (set.lo <= v && v <= set.hi) count += end_weight(i, *range);
  }
  out.value = path.dt() * count;
  return out;
}

double local_time_eps(const PathGrid& path, double x, double t, double eps) {
  if (!(eps > 0.0)) throw DomainError("local_time_eps: eps must be positive");
  const auto occ = occupation_time(path, Interval{x - eps, x + eps}, Interval{0.0, t});
  return occ.value / (2.0 * eps);
}

double fourier_integrand(const PathGrid& path, double x, double t, double u) {
  const auto range = window_indices(path, 0.0, t);
  if (!range) return 0.0;
  double acc = 0.0;
  for (std::size_t i = range->first; i <= range->last; ++i) {
    acc += end_weight(i, *range) * std::cos(u * (path.values(static_cast<Eigen::Index>(i)) - x));
  }
  return path.dt() * acc;
}

double local_time_fourier(const PathGrid& path, double x, double t, double cutoff, std::size_t n_freq) {
  check_fourier_args(cutoff, n_freq);
  const auto range = window_indices(path, 0.0, t);
  if (!range) return 0.0;
  const std::size_t m = frequency_half_count(n_freq);
  const double du = cutoff / static_cast<double>(m);
  std::vector<double> taper(m);
  for (std::size_t k = 0; k < m; ++k) taper[k] = 1.0 - static_cast<double>(k) / static_cast<double>(m);
  double total = 0.0;
  for (std::size_t i = range->first; i <= range->last; ++i) {
    const double d = path.values(static_cast<Eigen::Index>(i)) - x;
    // sum over k = -M..M of taper * cos(k du d); the pair +-k contributes 2 cos.
    const std::complex<double> step(std::cos(du * d), std::sin(du * d));
    std::complex<double> rot(1.0, 0.0);
    double s = taper[0];
    for (std::size_t k = 1; k < m; ++k) {
      rot *= step;
      s += 2.0 * taper[k] * rot.real();
    }
    total += end_weight(i, *range) * s;
  }
  return total * du * path.dt() / (2.0 * std::numbers::pi);
}

double local_time_fourier_fejer(const PathGrid& path, double x, double t, double cutoff, std::size_t n_freq) {
  check_fourier_args(cutoff, n_freq);
  const auto range = window_indices(path, 0.0, t);
  if (!range) return 0.0;
  const std::size_t m = frequency_half_count(n_freq);
  const double du = cutoff / static_cast<double>(m);
  double total = 0.0;
  for (std::size_t i = range->first; i <= range->last; ++i) {
    total += end_weight(i, *range) * fejer_weight(path.values(static_cast<Eigen::Index>(i)) - x, du, m);
  }
  return total * path.dt() / (2.0 * std::numbers::pi);
}

double default_bandwidth(const PathGrid& path, double c) { return c * std::pow(path.dt(), path.spec.tau); }

Eigen::VectorXd default_level_grid(const PathGrid& path, double eps, std::size_t count) {
  if (count < 2) throw DomainError("default_level_grid: need at least two levels");
  const double lo = path.values.minCoeff() - eps;
  const double hi = path.values.maxCoeff() + eps;
  return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(count), lo, hi);
}

Eigen::VectorXd default_time_grid(const PathGrid& path, std::size_t count, double t_max) {
  if (count < 2) throw DomainError("default_time_grid: need at least two times");
  const std::size_t last = time_index(path, t_max);
  std::vector<double> times;
  for (std::size_t j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(last) /
                                                            static_cast<double>(count - 1)));
    const double t = path.times(static_cast<Eigen::Index>(idx));
    if (times.empty() || t > times.back()) times.push_back(t);
  }
  return Eigen::Map<Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
}

LocalTimeField local_time_field(const PathGrid& path, const Eigen::VectorXd& x_grid, const Eigen::VectorXd& t_grid,
                                LocalTimeEstimator estimator, double bandwidth, std::size_t n_freq) {
  if (!(bandwidth > 0.0)) throw DomainError("local_time_field: bandwidth must be positive");
  if (x_grid.size() == 0 || t_grid.size() == 0) throw DomainError("local_time_field: empty grid");
  if (!is_sorted(x_grid) || !is_sorted(t_grid)) throw DomainError("local_time_field: grids must be sorted");
  if (!is_uniform(x_grid)) throw DomainError("local_time_field: level grid must be uniform");
  if (estimator == LocalTimeEstimator::Fourier) check_fourier_args(bandwidth, n_freq);

  const double dt = path.dt();
  std::vector<std::size_t> t_index(static_cast<std::size_t>(t_grid.size()));
  for (Eigen::Index j = 0; j < t_grid.size(); ++j) {
    const double pos = t_grid(j) / dt;
    const double r = std::round(pos);
    if (t_grid(j) < 0.0 || std::abs(pos - r) > 1e-6 || r > static_cast<double>(path.spec.n_steps))
      throw DomainError("local_time_field: t_grid must consist of path times");
    t_index[static_cast<std::size_t>(j)] = static_cast<std::size_t>(r);
  }

  LocalTimeField field;
  field.x_grid = x_grid;
  field.t_grid = t_grid;
  field.estimator = estimator;
  field.bandwidth = bandwidth;
  field.n_freq = estimator == LocalTimeEstimator::Fourier ? n_freq : 0;
  field.source_spec = path.spec;
  const Eigen::Index levels = x_grid.size();
  field.values = Eigen::MatrixXd::Zero(levels, t_grid.size());

  const double x0 = x_grid(0);
  const double dx = levels > 1 ? x_grid(1) - x_grid(0) : 1.0;
  const std::size_t m = frequency_half_count(n_freq);
  const double du = bandwidth / static_cast<double>(m);

  // Per-point contribution to every level, accumulated into a running sum;
  // snapshots subtract half of the first and the current point (trapezoid).
  Eigen::VectorXd running = Eigen::VectorXd::Zero(levels);
  Eigen::VectorXd first_point = Eigen::VectorXd::Zero(levels);
  Eigen::VectorXd current = Eigen::VectorXd::Zero(levels);

  auto contribution = [&](double v, Eigen::VectorXd& out) {
    out.setZero();
    if (estimator == LocalTimeEstimator::EpsOccupation) {
      const double eps = bandwidth;
      Eigen::Index lo = levels > 1 ? static_cast<Eigen::Index>(std::floor((v - eps - x0) / dx)) - 1 : 0;
      Eigen::Index hi = levels > 1 ? static_cast<Eigen::Index>(std::ceil((v + eps - x0) / dx)) + 1 : 0;
      lo = std::max<Eigen::Index>(lo, 0);
      hi = std::min<Eigen::Index>(hi, levels - 1);
      for (Eigen::Index j = lo; j <= hi; ++j) {
        const double x = x_grid(j);
        if (x - eps <= v && v <= x + eps) out(j) = 1.0;
      }
    } else {
      for (Eigen::Index j = 0; j < levels; ++j) out(j) = fejer_weight(v - x_grid(j), du, m);
    }
  };

  const std::size_t last = *std::max_element(t_index.begin(), t_index.end());
  std::size_t next_col = 0;
  const double denom = estimator == LocalTimeEstimator::EpsOccupation ? 2.0 * bandwidth : 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i <= last; ++i) {
    contribution(path.values(static_cast<Eigen::Index>(i)), current);
    if (i == 0) first_point = current;
    running += current;
    while (next_col < t_index.size() && t_index[next_col] == i) {
      const auto col = static_cast<Eigen::Index>(next_col);
      if (i > 0) {
        const Eigen::VectorXd weighted = running - 0.5 * first_point - 0.5 * current;
        field.values.col(col) = (dt * weighted) / denom;
      }
      ++next_col;
    }
  }

  if (estimator == LocalTimeEstimator::Fourier) {
    for (Eigen::Index j = 0; j < field.values.size(); ++j) {
      double& v = field.values.data()[j];
      if (v < 0.0) {
        v = 0.0;
        ++field.clipped;
      }
    }
  }
  return field;
}

AdditivityResult additivity_check(const PathGrid& path, double x, double s, double t, double eps) {
  if (!(0.0 <= s && s <= t && t <= path.spec.horizon * (1.0 + 1e-12)))
    throw DomainError("additivity_check: need 0 <= s <= t <= T");
  AdditivityResult out;
  out.lhs = local_time_eps(path, x, t, eps);
  const PathGrid shifted = shift_path(path, s);
  out.rhs = local_time_eps(path, x, s, eps) + local_time_eps(shifted, x, t - s, eps);
  return out;
}

SupDiffStats sup_diff_stats(const LocalTimeField& field, double t, double nu) {
  if (field.x_grid.size() < 2) throw DomainError("sup_diff_stats: need at least two levels");
  if (!(nu > 0.0)) throw DomainError("sup_diff_stats: nu must be positive");
  const Eigen::Index col = field.time_column(t);
  const Eigen::VectorXd column = field.values.col(col);
  const Eigen::Index levels = column.size();

  Eigen::Index first = -1;
  Eigen::Index last = -1;
  for (Eigen::Index i = 0; i < levels; ++i) {
    if (column(i) > 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  SupDiffStats out;
  if (first < 0) return out;
  const Eigen::Index lo = std::max<Eigen::Index>(first - 1, 0);
  const Eigen::Index hi = std::min<Eigen::Index>(last + 1, levels - 1);
  const auto window = column.segment(lo, hi - lo + 1);
  out.range = window.maxCoeff() - window.minCoeff();
  if (out.range == 0.0) return out;

  // Gap-ordered scan: the quotient for gap g is at most K / (g dx)^nu, which
  // only decreases in g, so the scan stops once that bound cannot win.
  const double dx = field.dx();
  const Eigen::Index count = window.size();
  for (Eigen::Index gap = 1; gap < count; ++gap) {
    const double denom = std::pow(static_cast<double>(gap) * dx, nu);
    if (out.range / denom <= out.holder) break;
    const double diff = (window.tail(count - gap) - window.head(count - gap)).cwiseAbs().maxCoeff();
    out.holder = std::max(out.holder, diff / denom);
  }
  return out;
}

double running_holder_sup(const LocalTimeField& field, double t, double nu) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < field.t_grid.size(); ++j) {
    if (field.t_grid(j) > t * (1.0 + 1e-12)) break;
    best = std::max(best, sup_diff_stats(field, field.t_grid(j), nu).holder);
  }
  return best;
}

double holder_exponent_bound(double tau) { return (1.0 - tau) / (2.0 * tau); }

}  // namespace fbmlt
