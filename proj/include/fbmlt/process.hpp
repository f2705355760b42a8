#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace fbmlt {

enum class ProcessKind { Fbm, RiemannLiouville };
enum class SamplerKind { Cholesky, Circulant, KernelConv };

/// Which self-similar Gaussian process to sample and on what grid.
/// `tau` is H for fBm and beta for the Riemann-Liouville process.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::Fbm;
  double tau = 0.5;
  double horizon = 1.0;
  std::size_t n_steps = 1024;
  SamplerKind sampler = SamplerKind::Circulant;

  double dt() const { return horizon / static_cast<double>(n_steps); }
  /// Throws DomainError on any violated invariant.
  void validate() const;
};

/// Sampled trajectory on the uniform grid t_i = i*T/n, starting at the origin.
struct PathGrid {
  Eigen::VectorXd times;
  Eigen::VectorXd values;
  ProcessSpec spec;
  std::uint64_t seed = 0;
  bool cholesky_fallback = false;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double dt() const { return spec.dt(); }
};

Eigen::VectorXd uniform_times(double horizon, std::size_t n_steps);

/// Restrict to times >= s and re-base time to start at 0. Values are kept:
/// the result is the path seen through the shift operator.
PathGrid shift_path(const PathGrid& path, double s);

/// Index of the grid point at or before time t (with a small tolerance).
std::size_t time_index(const PathGrid& path, double t);

bool is_power_of_two(std::size_t n);

std::string to_string(ProcessKind kind);
std::string to_string(SamplerKind kind);
ProcessKind parse_process_kind(std::string_view text);
SamplerKind parse_sampler_kind(std::string_view text);

}  // namespace fbmlt
