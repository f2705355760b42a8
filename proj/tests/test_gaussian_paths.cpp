#include "fbmlt/covariance.hpp"
#include "fbmlt/errors.hpp"
#include "fbmlt/parallel.hpp"
#include "fbmlt/rng.hpp"
#include "fbmlt/samplers.hpp"
#include "fbmlt/stats.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace fbmlt;

namespace {

// int_0^s (t-u)^{b-1/2} (s-u)^{b-1/2} du by the midpoint rule after u = s - v^2,
// which removes the (s-u) singularity; slow but independent of the library.
double rl_covariance_brute(double t, double s, double beta) {
  if (s > t) std::swap(s, t);
  const int m = 200000;
  const double top = std::sqrt(s);
  const double h = top / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = (i + 0.5) * h;
    const double u = s - v * v;
    acc += 2.0 * v * std::pow(t - u, beta - 0.5) * std::pow(v * v, beta - 0.5);
  }
  return acc * h;
}

ProcessSpec fbm(double h, std::size_t n, SamplerKind sampler = SamplerKind::Circulant, double horizon = 1.0) {
  ProcessSpec s;
  s.kind = ProcessKind::Fbm;
  s.tau = h;
  s.n_steps = n;
  s.sampler = sampler;
  s.horizon = horizon;
  return s;
}

ProcessSpec rl(double beta, std::size_t n, SamplerKind sampler = SamplerKind::KernelConv, double horizon = 1.0) {
  ProcessSpec s = fbm(beta, n, sampler, horizon);
  s.kind = ProcessKind::RiemannLiouville;
  return s;
}

}  // namespace

TEST_CASE("fbm covariance basics") {
  CHECK(fbm_covariance(1.0, 1.0, 0.3) == doctest::Approx(1.0));
  CHECK(fbm_covariance(0.7, 0.2, 0.5) == doctest::Approx(0.2));
  CHECK(fbm_covariance(0.7, 0.2, 0.75) == doctest::Approx(fbm_covariance(0.2, 0.7, 0.75)));
  // Increment covariance: fGn at lag 1 is (2^{2H} - 2)/2 for dt = 1.
  CHECK(fgn_autocovariance(1, 0.75, 1.0) == doctest::Approx((std::pow(2.0, 1.5) - 2.0) / 2.0));
  CHECK(fgn_autocovariance(5, 0.5, 0.1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("rl covariance: diagonal, polynomial case and brute force") {
  for (double beta : {0.3, 0.7, 1.2}) CHECK(rl_covariance(0.8, 0.8, beta) == doctest::Approx(std::pow(0.8, 2 * beta) / (2 * beta)));
  // beta = 3/2 gives a polynomial kernel: int_0^s (t-u)(s-u) du = t s^2/2 - s^3/6.
  CHECK(rl_covariance(1.0, 0.4, 1.5) == doctest::Approx(0.4 * 0.4 / 2 - 0.4 * 0.4 * 0.4 / 6).epsilon(1e-12));
  for (double beta : {0.3, 0.7, 1.2}) {
    CHECK(rl_covariance(1.0, 0.35, beta) == doctest::Approx(rl_covariance_brute(1.0, 0.35, beta)).epsilon(1e-6));
    CHECK(rl_covariance(0.6, 0.9, beta) == doctest::Approx(rl_covariance_brute(0.6, 0.9, beta)).epsilon(1e-6));
  }
  // beta = 1/2 is Brownian motion.
  CHECK(rl_covariance(0.9, 0.3, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("covariance matrix of H = 0.75 on 64 steps is PSD before clipping") {
  const ProcessSpec spec = fbm(0.75, 64, SamplerKind::Cholesky);
  const auto grid = uniform_times(1.0, 64);
  Eigen::MatrixXd m(65, 65);
  for (int i = 0; i <= 64; ++i)
    for (int j = 0; j <= 64; ++j) m(i, j) = fbm_covariance(grid(i), grid(j), 0.75);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  const auto built = build_covariance(spec);
  CHECK(built.entries.rows() == 65);
  CHECK(built.min_eigenvalue > -1e-10);
  CHECK((built.entries - built.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("psd clipping removes round-off negatives and rejects real ones") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(2, 2) = -1e-12;
  auto [min_eig, clipped] = clip_to_psd(m);
  CHECK(min_eig == doctest::Approx(-1e-12));
  CHECK(clipped == 1);
  CHECK(m(2, 2) == doctest::Approx(0.0));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 0) = -1e-3;
  CHECK_THROWS_AS(clip_to_psd(bad), NumericalError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(fbm(0.5, 1000).validate(), DomainError);  // circulant needs 2^k
  CHECK_THROWS_AS(fbm(1.0, 1024).validate(), DomainError);
  CHECK_THROWS_AS(fbm(0.5, 1024, SamplerKind::KernelConv).validate(), DomainError);
  CHECK_THROWS_AS(rl(0.7, 1024, SamplerKind::Circulant).validate(), DomainError);
  CHECK_NOTHROW(rl(1.2, 1000).validate());
  CHECK_THROWS_AS(PathSampler(fbm(0.5, 8192, SamplerKind::Cholesky)), DomainError);
}

TEST_CASE("kernel weights match cell integrals of the RL kernel") {
  const double beta = 0.7;
  const double dt = 0.01;
  const auto g = rl_kernel_coefficients(beta, 50);
  REQUIRE(g.size() == 50);
  for (std::size_t k = 1; k <= 50; k += 7) {
    // int_{(k-1)dt}^{k dt} u^{beta-1/2} du by fine midpoint rule.
    const int m = 20000;
    const double a = (k - 1) * dt;
    const double h = dt / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += std::pow(a + (i + 0.5) * h, beta - 0.5);
    acc *= h;
    const double weight = std::pow(dt, beta + 0.5) * g[k - 1] / (beta + 0.5);
    CHECK(weight == doctest::Approx(acc).epsilon(k == 1 ? 1e-3 : 1e-7));
  }
  double direct = 0.0;
  for (std::size_t k = 0; k < 50; ++k) direct += std::pow(std::pow(dt, beta) * g[k] / (beta + 0.5), 2);
  CHECK(rl_kernel_variance(beta, dt, 50) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("kernel sampler equals the direct O(n^2) convolution") {
  // The sampler drives cell j = [t_j, t_{j+1}) with the j-th normal of the
  // seed's stream; X(t_i) = sum_j w(i, j) xi_j / sqrt(dt), w the cell integral.
  for (double beta : {0.5, 0.7, 1.2}) {
    const std::size_t n = 300;
    const ProcessSpec spec = rl(beta, n);
    const PathGrid p = sample_rl_kernel(spec, 99);
    NormalStream z(99);
    std::vector<double> xi(n);
    for (auto& v : xi) v = z();
    const double dt = spec.dt();
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; i += 13) {
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double a = static_cast<double>(i - j - 1) * dt;
        const double b = static_cast<double>(i - j) * dt;
        const double w = (std::pow(b, beta + 0.5) - std::pow(a, beta + 0.5)) / (beta + 0.5);
        acc += w * xi[j] / std::sqrt(dt);
      }
      worst = std::max(worst, std::abs(acc - p.values(static_cast<Eigen::Index>(i))));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("circulant embedding of fGn has no negative eigenvalues on power-of-two grids") {
  for (double h : {0.1, 0.3, 0.5, 0.75, 0.9}) {
    const PathSampler s(fbm(h, 1024));
    CHECK_FALSE(s.cholesky_fallback());
    CHECK(s.min_circulant_eigenvalue() > kCirculantNegativeTolerance);
  }
}

TEST_CASE("samplers are deterministic and exactly self-similar") {
  const ProcessSpec unit = fbm(0.7, 512);
  const PathGrid a = sample_path(unit, 11);
  const PathGrid b = sample_path(unit, 11);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.values(0) == 0.0);
  const PathGrid c = sample_path(fbm(0.7, 512, SamplerKind::Circulant, 16.0), 11);
  CHECK((c.values - std::pow(16.0, 0.7) * a.values).cwiseAbs().maxCoeff() < 1e-10);
  const PathGrid d = sample_path(rl(1.2, 300), 5);
  const PathGrid e = sample_path(rl(1.2, 300, SamplerKind::KernelConv, 4.0), 5);
  CHECK((e.values - std::pow(4.0, 1.2) * d.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sample variance at t = 1 is within 4 standard errors") {
  struct Case {
    ProcessSpec spec;
    double expected;
  };
  const std::vector<Case> cases{
      {fbm(0.3, 256), 1.0},
      {fbm(0.75, 256, SamplerKind::Cholesky), 1.0},
      {rl(0.7, 200, SamplerKind::Cholesky), 1.0 / 1.4},
      {rl(1.2, 256), rl_kernel_variance(1.2, 1.0 / 256, 256)},
  };
  const std::size_t n = 20000;
  for (const auto& c : cases) {
    const PathSampler s(c.spec);
    const auto v = parallel_map(n, 1, [&](std::size_t r) { return s.sample(derive_seed(3, r)).values(static_cast<Eigen::Index>(c.spec.n_steps)); });
    CHECK(std::abs(variance(v) - c.expected) < 4.0 * c.expected * std::sqrt(2.0 / n));
  }
}

TEST_CASE("circulant increments have the fGn autocorrelation") {
  const ProcessSpec spec = fbm(0.75, 4096);
  const PathGrid p = sample_path(spec, 21);
  std::vector<double> inc(4096);
  for (int i = 0; i < 4096; ++i) inc[i] = p.values(i + 1) - p.values(i);
  const double rho1 = (std::pow(2.0, 1.5) - 2.0) / 2.0;
  CHECK(std::abs(autocorrelation(inc, 1) - rho1) < 0.06);
}
