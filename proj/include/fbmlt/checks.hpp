#pragma once

#include "fbmlt/functionals.hpp"
#include "fbmlt/local_time.hpp"
#include "fbmlt/process.hpp"
#include "fbmlt/verification.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fbmlt {

/// Everything a check driver needs. `spec` is the unit-horizon path the
/// short-time checks sample; the asymptotic checks swap in their own horizon
/// and step count.
struct CheckOptions {
  ProcessSpec spec;
  TestFunction function = TestFunction::gaussian_bump(1.0, 0.0, 0.25);
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<double> ladder{1.0, 4.0, 16.0, 64.0};

  std::vector<double> scaling_lambdas{4.0, 16.0};
  double translation_shift = 5.0;
  /// Bandwidth multiple for the field statistics of the scaling and
  /// translation checks; at 1 the range and Holder sups pick up estimator noise.
  double field_bandwidth_factor = 4.0;
  std::size_t equivalence_steps = 256;
  std::size_t pathwise_paths = 100;  // occupation density and additivity

  double strong_horizon = 1000.0;
  std::size_t strong_steps = std::size_t{1} << 16;
  std::size_t strong_replicates = 200;
  double strong_window_lo = 10.0;

  double lil_horizon = 1e4;
  std::size_t lil_steps = std::size_t{1} << 18;
  std::size_t lil_replicates = 200;
  double lil_window_lo = 100.0;

  /// When set, checks that produce series (residuals, regression) write them here.
  std::filesystem::path artifact_dir;
  std::function<void(std::string_view)> progress;
};

/// Bandwidth used for every field-based statistic: the estimator scale
/// c (T / n_ref)^tau rounded to a whole number of level spacings, at least one.
double field_bandwidth(double horizon, std::size_t n_ref, double tau, double dx, double c = 1.0);

/// Field on 257 uniform levels covering the path (with room for the
/// bandwidth) at the given times. n_ref sets the bandwidth resolution.
LocalTimeField occupation_field(const PathGrid& path, const Eigen::VectorXd& t_grid, std::size_t n_ref,
                                std::size_t levels = 257, double c = 1.0);

/// Independent stream of replicate seeds for one ensemble of a check.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream);

std::vector<VerificationReport> check_constants(const CheckOptions& opts);
std::vector<VerificationReport> check_covariance(const CheckOptions& opts);
std::vector<VerificationReport> check_sampler_equivalence(const CheckOptions& opts);
std::vector<VerificationReport> check_occupation_density(const CheckOptions& opts);
std::vector<VerificationReport> check_additivity(const CheckOptions& opts);
std::vector<VerificationReport> check_scaling(const CheckOptions& opts);
std::vector<VerificationReport> check_translation(const CheckOptions& opts);
std::vector<VerificationReport> check_first_order_limit(const CheckOptions& opts);
std::vector<VerificationReport> check_strong_approximation(const CheckOptions& opts);
std::vector<VerificationReport> check_lil_paired(const CheckOptions& opts);

/// Registered check names, in suite order.
const std::vector<std::string>& check_names();
bool is_check_name(std::string_view name);
std::vector<VerificationReport> run_check(std::string_view name, const CheckOptions& opts);

}  // namespace fbmlt
