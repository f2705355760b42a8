#include "fbmlt/samplers.hpp"

#include "fbmlt/covariance.hpp"
#include "fbmlt/errors.hpp"
#include "fbmlt/rng.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace fbmlt {

namespace {

using Complex = std::complex<double>;

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Eigen::VectorXd cumulate(const Eigen::VectorXd& increments) {
  Eigen::VectorXd values(increments.size() + 1);
  values(0) = 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < increments.size(); ++i) {
    acc += increments(i);
    values(i + 1) = acc;
  }
  return values;
}

}  // namespace

std::vector<double> rl_kernel_coefficients(double beta, std::size_t n) {
  const double p = beta + 0.5;
  std::vector<double> g(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto kd = static_cast<double>(k);
    g[k - 1] = std::pow(kd, p) - std::pow(kd - 1.0, p);
  }
  return g;
}

double rl_kernel_variance(double beta, double dt, std::size_t i) {
  const auto g = rl_kernel_coefficients(beta, i);
  double sum = 0.0;
  for (double v : g) sum += v * v;
  const double p = beta + 0.5;
  return std::pow(dt, 2.0 * beta) / (p * p) * sum;
}

PathSampler::PathSampler(const ProcessSpec& spec) : spec_(spec) {
  spec_.validate();
  times_ = uniform_times(spec_.horizon, spec_.n_steps);
  switch (spec_.sampler) {
    case SamplerKind::Cholesky: init_cholesky(); break;
    case SamplerKind::Circulant: init_circulant(); break;
    case SamplerKind::KernelConv: init_kernel(); break;
  }
}

void PathSampler::init_cholesky() {
  const std::size_t n = spec_.n_steps;
  if (n > kCholeskyCap) throw DomainError("cholesky sampler: n_steps exceeds cap of " + std::to_string(kCholeskyCap));
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov(size, size);
  const double dt = spec_.dt();
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = process_covariance<double>(spec_, static_cast<double>(i + 1) * dt, static_cast<double>(j + 1) * dt);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    triangular_ = true;
    return;
  }
  // Semi-definite after round-off: repair and use the symmetric square root.
  clip_to_psd<double>(cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericalError("cholesky sampler: factorization failed");
  factor_ = solver.eigenvectors() * solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void PathSampler::init_circulant() {
  const std::size_t n = spec_.n_steps;
  const std::size_t m = 2 * n;
  std::vector<Complex> row(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lag = k <= n ? k : m - k;
    row[k] = fgn_autocovariance<double>(static_cast<std::ptrdiff_t>(lag), spec_.tau, spec_.dt());
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> eig;
  fft.fwd(eig, row);
  circulant_scale_.resize(static_cast<Eigen::Index>(m));
  min_circulant_eig_ = eig[0].real();
  for (std::size_t k = 0; k < m; ++k) {
    const double lambda = eig[k].real();
    min_circulant_eig_ = std::min(min_circulant_eig_, lambda);
    circulant_scale_(static_cast<Eigen::Index>(k)) = std::sqrt(std::max(lambda, 0.0) / static_cast<double>(m));
  }
  if (min_circulant_eig_ < kCirculantNegativeTolerance) {
    fallback_ = true;
    circulant_scale_.resize(0);
    init_cholesky();
  }
}

void PathSampler::init_kernel() {
  const std::size_t n = spec_.n_steps;
  const double p = spec_.tau + 0.5;
  kernel_prefactor_ = std::pow(spec_.dt(), spec_.tau) / p;
  if (spec_.tau == 0.5) return;  // unit kernel: plain cumulative sum
  const std::size_t len = next_power_of_two(2 * n);
  const auto g = rl_kernel_coefficients(spec_.tau, n);
  std::vector<Complex> padded(len, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) padded[k] = g[k];
  Eigen::FFT<double> fft;
  fft.fwd(kernel_hat_, padded);
}

Eigen::VectorXd PathSampler::draw_cholesky(std::uint64_t seed) const {
  NormalStream normal(seed);
  Eigen::VectorXd z(factor_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal();
  Eigen::VectorXd values(factor_.rows() + 1);
  values(0) = 0.0;
  if (triangular_) {
    values.tail(factor_.rows()).noalias() = factor_.triangularView<Eigen::Lower>() * z;
  } else {
    values.tail(factor_.rows()).noalias() = factor_ * z;
  }
  return values;
}

Eigen::VectorXd PathSampler::draw_circulant(std::uint64_t seed) const {
  const auto m = static_cast<std::size_t>(circulant_scale_.size());
  const std::size_t n = m / 2;
  NormalStream normal(seed);
  std::vector<Complex> weighted(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal();
    const double im = normal();
    weighted[k] = circulant_scale_(static_cast<Eigen::Index>(k)) * Complex(re, im);
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> transformed;
  fft.fwd(transformed, weighted);
  Eigen::VectorXd noise(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) noise(static_cast<Eigen::Index>(j)) = transformed[j].real();
  return cumulate(noise);
}

Eigen::VectorXd PathSampler::draw_kernel(std::uint64_t seed) const {
  const std::size_t n = spec_.n_steps;
  NormalStream normal(seed);
  if (kernel_hat_.empty()) {
    Eigen::VectorXd increments(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < increments.size(); ++j) increments(j) = kernel_prefactor_ * normal();
    return cumulate(increments);
  }
  const std::size_t len = kernel_hat_.size();
  std::vector<Complex> noise(len, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) noise[j] = normal();
  Eigen::FFT<double> fft;
  std::vector<Complex> noise_hat;
  fft.fwd(noise_hat, noise);
  for (std::size_t k = 0; k < len; ++k) noise_hat[k] *= kernel_hat_[k];
  std::vector<Complex> conv;
  fft.inv(conv, noise_hat);
  Eigen::VectorXd values(static_cast<Eigen::Index>(n) + 1);
  values(0) = 0.0;
  for (std::size_t i = 1; i <= n; ++i) values(static_cast<Eigen::Index>(i)) = kernel_prefactor_ * conv[i - 1].real();
  return values;
}

PathGrid PathSampler::sample(std::uint64_t seed) const {
  PathGrid path;
  path.spec = spec_;
  path.seed = seed;
  path.times = times_;
  path.cholesky_fallback = fallback_;
  if (factor_.size() > 0) {
    path.values = draw_cholesky(seed);
  } else if (circulant_scale_.size() > 0) {
    path.values = draw_circulant(seed);
  } else {
    path.values = draw_kernel(seed);
  }
  return path;
}

PathGrid sample_cholesky(const ProcessSpec& spec, std::uint64_t seed) {
  ProcessSpec s = spec;
  s.sampler = SamplerKind::Cholesky;
  return PathSampler(s).sample(seed);
}

PathGrid sample_circulant_fbm(const ProcessSpec& spec, std::uint64_t seed) {
  if (spec.kind != ProcessKind::Fbm) throw DomainError("circulant sampler is only valid for fBm");
  ProcessSpec s = spec;
  s.sampler = SamplerKind::Circulant;
  return PathSampler(s).sample(seed);
}

PathGrid sample_rl_kernel(const ProcessSpec& spec, std::uint64_t seed) {
  if (spec.kind != ProcessKind::RiemannLiouville) throw DomainError("kernel sampler is only valid for the RL process");
  ProcessSpec s = spec;
  s.sampler = SamplerKind::KernelConv;
  return PathSampler(s).sample(seed);
}

PathGrid sample_path(const ProcessSpec& spec, std::uint64_t seed) { return PathSampler(spec).sample(seed); }

}  // namespace fbmlt
