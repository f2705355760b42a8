#pragma once

#include "fbmlt/errors.hpp"
#include "fbmlt/process.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <tuple>
#include <utility>

namespace fbmlt {

/// E[B^H(t) B^H(s)] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
template <typename Scalar>
Scalar fbm_covariance(Scalar t, Scalar s, Scalar hurst) {
  using std::abs;
  using std::pow;
  if (!(hurst > Scalar(0) && hurst < Scalar(1))) throw DomainError("fbm_covariance: H must lie in (0,1)");
  if (t < Scalar(0) || s < Scalar(0)) throw DomainError("fbm_covariance: times must be non-negative");
  const Scalar two_h = Scalar(2) * hurst;
  return (pow(t, two_h) + pow(s, two_h) - pow(abs(t - s), two_h)) / Scalar(2);
}

/// Autocovariance of unit-spaced fractional Gaussian noise at `lag`, scaled to
/// spacing dt: dt^{2H} (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
template <typename Scalar>
Scalar fgn_autocovariance(std::ptrdiff_t lag, Scalar hurst, Scalar dt) {
  using std::pow;
  const Scalar k = Scalar(lag < 0 ? -lag : lag);
  const Scalar two_h = Scalar(2) * hurst;
  const Scalar unit = (pow(k + Scalar(1), two_h) - Scalar(2) * pow(k, two_h) + pow(std::abs(k - Scalar(1)), two_h)) / Scalar(2);
  return pow(dt, two_h) * unit;
}

/// Cov(W^beta(t), W^beta(s)) = int_0^{min} (t-u)^{beta-1/2} (s-u)^{beta-1/2} du.
///
/// Closed form on the diagonal. Off the diagonal, with s < t, d = t - s and
/// a = beta - 1/2, substitute v = s - u and then v = s y^{1/(a+1)}:
///   int_0^s v^a (d+v)^a dv = s^{a+1}/(a+1) int_0^1 (d + s y^{1/(a+1)})^a dy,
/// which has a bounded integrand, then adaptive Gauss-Kronrod.
template <typename Scalar>
Scalar rl_covariance(Scalar t, Scalar s, Scalar beta) {
  using std::pow;
  if (!(beta > Scalar(0))) throw DomainError("rl_covariance: beta must be positive");
  if (t < Scalar(0) || s < Scalar(0)) throw DomainError("rl_covariance: times must be non-negative");
  if (s > t) std::swap(s, t);
  if (s == Scalar(0)) return Scalar(0);
  const Scalar a = beta - Scalar(0.5);
  if (t == s) return pow(t, Scalar(2) * beta) / (Scalar(2) * beta);
  if (a == Scalar(0)) return s;
  const Scalar d = t - s;
  const Scalar p = Scalar(1) / (a + Scalar(1));
  auto integrand = [&](Scalar y) { return pow(d + s * pow(y, p), a); };
  const Scalar inner = boost::math::quadrature::gauss_kronrod<Scalar, 15>::integrate(
      integrand, Scalar(0), Scalar(1), 15, Scalar(1e-13));
  return pow(s, a + Scalar(1)) / (a + Scalar(1)) * inner;
}

template <typename Scalar>
Scalar process_covariance(const ProcessSpec& spec, Scalar t, Scalar s) {
  return spec.kind == ProcessKind::Fbm ? fbm_covariance<Scalar>(t, s, Scalar(spec.tau))
                                       : rl_covariance<Scalar>(t, s, Scalar(spec.tau));
}

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct CovarianceMatrix {
  MatrixX<Scalar> entries;
  Scalar min_eigenvalue = Scalar(0);
  Eigen::Index clipped = 0;
};

/// Relative threshold below which negative eigenvalues are round-off.
inline constexpr double kPsdClipTolerance = 1e-10;

/// Clips eigenvalues in [-tol*lambda_max, 0) to zero and rebuilds the matrix
/// if any were clipped. Returns the smallest eigenvalue before clipping and the
/// number clipped. Throws NumericalError on anything more negative.
template <typename Scalar>
std::pair<Scalar, Eigen::Index> clip_to_psd(MatrixX<Scalar>& m, Scalar tol = Scalar(kPsdClipTolerance)) {
  if (m.rows() == 0) return {Scalar(0), 0};
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("clip_to_psd: eigen decomposition failed");
  auto eig = solver.eigenvalues().eval();
  const Scalar lambda_max = std::max(eig.maxCoeff(), Scalar(0));
  const Scalar lambda_min = eig.minCoeff();
  if (lambda_min < -tol * lambda_max) throw NumericalError("clip_to_psd: covariance is indefinite beyond tolerance");
  Eigen::Index clipped = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i) < Scalar(0)) {
      eig(i) = Scalar(0);
      ++clipped;
    }
  }
  if (clipped > 0) {
    const auto& v = solver.eigenvectors();
    m = v * eig.asDiagonal() * v.transpose();
  }
  return {lambda_min, clipped};
}

/// Covariance of the process at the grid times t_0..t_n, PSD-repaired.
template <typename Scalar = double>
CovarianceMatrix<Scalar> build_covariance(const ProcessSpec& spec) {
  spec.validate();
  const Eigen::Index size = static_cast<Eigen::Index>(spec.n_steps) + 1;
  const Scalar dt = Scalar(spec.horizon) / Scalar(spec.n_steps);
  CovarianceMatrix<Scalar> out;
  out.entries.resize(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Scalar v = process_covariance<Scalar>(spec, Scalar(i) * dt, Scalar(j) * dt);
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  std::tie(out.min_eigenvalue, out.clipped) = clip_to_psd<Scalar>(out.entries);
  return out;
}

}  // namespace fbmlt
