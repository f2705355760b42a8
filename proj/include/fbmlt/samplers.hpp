#pragma once

#include "fbmlt/process.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace fbmlt {

/// Largest grid the Cholesky sampler accepts; factorization is cubic.
inline constexpr std::size_t kCholeskyCap = 4096;
/// Circulant eigenvalues below this trigger the Cholesky fallback.
inline constexpr double kCirculantNegativeTolerance = -1e-8;

/// Precomputed sampler for one ProcessSpec. Construction does the expensive
/// part (factorization, circulant eigenvalues, kernel transform); `sample` is
/// a pure function of the seed and safe to call concurrently.
class PathSampler {
 public:
  explicit PathSampler(const ProcessSpec& spec);

  PathGrid sample(std::uint64_t seed) const;

  const ProcessSpec& spec() const { return spec_; }
  /// True when a circulant request was served by the Cholesky factor.
  bool cholesky_fallback() const { return fallback_; }
  /// Smallest circulant eigenvalue (circulant sampler only).
  double min_circulant_eigenvalue() const { return min_circulant_eig_; }

 private:
  void init_cholesky();
  void init_circulant();
  void init_kernel();

  Eigen::VectorXd draw_cholesky(std::uint64_t seed) const;
  Eigen::VectorXd draw_circulant(std::uint64_t seed) const;
  Eigen::VectorXd draw_kernel(std::uint64_t seed) const;

  ProcessSpec spec_;
  Eigen::VectorXd times_;
  bool fallback_ = false;
  bool triangular_ = false;
  double min_circulant_eig_ = 0.0;
  Eigen::MatrixXd factor_;                       // Cholesky: cov(t_1..t_n) = F F^T
  Eigen::VectorXd circulant_scale_;              // sqrt(lambda_k / m)
  std::vector<std::complex<double>> kernel_hat_; // FFT of the RL kernel coefficients
  double kernel_prefactor_ = 0.0;
};

/// Exact Gaussian sampling from the analytic covariance of t_1..t_n.
PathGrid sample_cholesky(const ProcessSpec& spec, std::uint64_t seed);
/// Davies-Harte circulant embedding of fractional Gaussian noise, cumulated.
PathGrid sample_circulant_fbm(const ProcessSpec& spec, std::uint64_t seed);
/// Riemann-Liouville path from Brownian increments with cell-integrated kernel
/// weights w(i,j) = int_{t_j}^{t_{j+1}} (t_i - u)^{beta-1/2} du.
PathGrid sample_rl_kernel(const ProcessSpec& spec, std::uint64_t seed);
/// Dispatch on spec.sampler.
PathGrid sample_path(const ProcessSpec& spec, std::uint64_t seed);

/// Coefficients g_k = k^{beta+1/2} - (k-1)^{beta+1/2}, k = 1..n; the RL
/// kernel weight of lag k is dt^{beta+1/2} g_k / (beta+1/2).
std::vector<double> rl_kernel_coefficients(double beta, std::size_t n);

/// Exact variance of the kernel-convolution sampler at t_i:
/// dt^{2 beta} / (beta+1/2)^2 * sum_{k<=i} g_k^2.
double rl_kernel_variance(double beta, double dt, std::size_t i);

}  // namespace fbmlt
