#pragma once

#include "fbmlt/checks.hpp"
#include "fbmlt/functionals.hpp"
#include "fbmlt/process.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace fbmlt {

/// One experiment, read from a sectioned `key = value` file:
///
///   [process]     kind, tau, horizon, n_steps, sampler
///   [function]    id, params (comma separated)
///   [experiment]  replicates, master_seed, lambda_ladder, output_dir, checks, threads, write_paths
///   [checks]      optional overrides of the per-check knobs in CheckOptions
///
/// Unknown sections or keys are rejected so typos cannot pass silently.
struct ExperimentConfig {
  ProcessSpec process;
  TestFunctionId function_id = TestFunctionId::GaussianBump;
  std::vector<double> function_params{1.0, 0.0, 0.25};
  std::size_t replicates = 1000;
  std::uint64_t master_seed = 1;
  std::vector<double> lambda_ladder{1.0, 4.0, 16.0, 64.0};
  std::filesystem::path output_dir = "out";
  std::vector<std::string> checks;
  unsigned threads = 1;
  /// Write one path CSV per replicate (capped) before running checks.
  std::size_t write_paths = 1;
  CheckOptions knobs;

  /// Throws DomainError on any violated invariant.
  void validate() const;
  TestFunction function() const { return TestFunction(function_id, function_params); }
  /// Options for the check drivers (progress callback left empty).
  CheckOptions check_options() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace fbmlt
