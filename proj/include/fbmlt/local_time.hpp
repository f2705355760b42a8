#pragma once

#include "fbmlt/process.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <limits>

namespace fbmlt {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval whole_line() { return {}; }
};

/// Occupation measure mu_B(A) of a path: time spent in A during window B.
struct OccupationEstimate {
  Interval set;
  Interval window;
  double value = 0.0;
};

enum class LocalTimeEstimator { EpsOccupation, Fourier };

/// L(x, t) sampled on x_grid (uniform levels) times t_grid (path times).
/// values(i, j) = L(x_grid[i], t_grid[j]).
struct LocalTimeField {
  Eigen::VectorXd x_grid;
  Eigen::VectorXd t_grid;
  Eigen::MatrixXd values;
  LocalTimeEstimator estimator = LocalTimeEstimator::EpsOccupation;
  /// eps for the occupation estimator, the frequency cutoff U for Fourier.
  double bandwidth = 0.0;
  /// Frequency intervals across [-U, U] (Fourier only).
  std::size_t n_freq = 0;
  /// Negative Fourier estimates clipped to zero.
  std::size_t clipped = 0;
  ProcessSpec source_spec;

  double dx() const { return x_grid.size() > 1 ? x_grid(1) - x_grid(0) : 0.0; }
  Eigen::Index time_column(double t) const;
};

/// dt * #{s_i in B : X(s_i) in A}, with half weight at the first and last grid
/// point inside B (trapezoid on the indicator). A is closed.
OccupationEstimate occupation_time(const PathGrid& path, Interval set, Interval window);

/// (1 / 2 eps) * occupation of [x - eps, x + eps] over [0, t].
double local_time_eps(const PathGrid& path, double x, double t, double eps);

/// Time integral int_0^t cos(u (X(s) - x)) ds on the grid (the real part of the
/// Fourier transform of the occupation measure after u <-> -u symmetrization).
double fourier_integrand(const PathGrid& path, double x, double t, double u);

/// (1 / 2 pi) sum_k du * (1 - |u_k|/U) * fourier_integrand(u_k) over the grid
/// u_k = k du, |k| <= M, M = ceil(n_freq / 2), du = U / M.
double local_time_fourier(const PathGrid& path, double x, double t, double cutoff, std::size_t n_freq);

/// Same frequency sum as local_time_fourier, evaluated through the discrete
/// Fejer kernel identity sum_{|k|<M} (1 - |k|/M) cos(k theta)
///   = sin^2(M theta / 2) / (M sin^2(theta / 2)). O(n) per level.
double local_time_fourier_fejer(const PathGrid& path, double x, double t, double cutoff, std::size_t n_freq);

/// Default occupation bandwidth: eps = c * dt^tau.
double default_bandwidth(const PathGrid& path, double c = 1.0);
/// `count` uniform levels spanning [min X - eps, max X + eps].
Eigen::VectorXd default_level_grid(const PathGrid& path, double eps, std::size_t count = 257);
/// `count` path times evenly spread over [0, t_max] (snapped to the grid).
Eigen::VectorXd default_time_grid(const PathGrid& path, std::size_t count, double t_max);

/// Builds L on x_grid x t_grid. x_grid must be uniform and sorted; t_grid must
/// be sorted path times. For EpsOccupation `bandwidth` is eps and a single pass
/// bins the path; for Fourier it is the cutoff U (n_freq intervals).
LocalTimeField local_time_field(const PathGrid& path, const Eigen::VectorXd& x_grid, const Eigen::VectorXd& t_grid,
                                LocalTimeEstimator estimator, double bandwidth, std::size_t n_freq = 4096);

/// Both sides of L(x,t) = L(x,s) + L(x,t-s) o theta_s, each by local_time_eps.
struct AdditivityResult {
  double lhs = 0.0;
  double rhs = 0.0;
};
AdditivityResult additivity_check(const PathGrid& path, double x, double s, double t, double eps);

/// Z = max over level pairs of |L(x,t) - L(y,t)| / |x - y|^nu (Holder quotient);
/// K = max over level pairs of |L(x,t) - L(y,t)|. Levels are restricted to the
/// visited range at time t.
struct SupDiffStats {
  double holder = 0.0;  // Z
  double range = 0.0;   // K
};
SupDiffStats sup_diff_stats(const LocalTimeField& field, double t, double nu);

/// Y(t) = max over field times s <= t of Z(s).
double running_holder_sup(const LocalTimeField& field, double t, double nu);

/// Largest Holder exponent allowed for local times of a tau-self-similar
/// process, (1 - tau) / (2 tau); the checks use half of it.
double holder_exponent_bound(double tau);

}  // namespace fbmlt
