#pragma once

#include "fbmlt/process.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace fbmlt {

/// Constants of the local-time LIL  limsup L(0,t) / (t^{1-tau} (loglog t)^tau)
/// = c_tau theta(tau)^{-tau}, with theta(tau) bracketed by [theta_lo, theta_hi].
struct LilConstants {
  double tau = 0.5;
  double delta_tau = 1.0;
  double theta0 = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double c_tau = 1.0;  // 1 for fBm, delta_tau for Riemann-Liouville
  double limsup_lo = 0.0;  // c_tau theta_hi^{-tau}
  double limsup_hi = 0.0;  // c_tau theta_lo^{-tau}
  bool ordered = true;     // theta_lo <= theta_hi held numerically
};

LilConstants lil_constants(double tau, ProcessKind kind);

enum class Decision { Pass, Fail, Inconclusive };
std::string to_string(Decision d);

struct VerificationReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::Inconclusive;
  double p_value = 1.0;
  std::size_t n_replicates = 0;
  std::map<std::string, std::string> metadata;
};

/// Significance level of every distributional identity test.
inline constexpr double kTestLevel = 0.01;

/// A scalar statistic over replicates, tagged with the index of the process.
struct ScalarEnsemble {
  double tau = 0.5;
  std::vector<double> values;
};

struct ScalingTransform {
  double lambda = 1.0;
  double exponent = 0.0;
};

/// Two-sample KS of `at_one` (statistic at t = 1) against lambda^exponent times
/// `at_lambda` (statistic at t = lambda). PASS iff not rejected at 0.01.
VerificationReport scaling_test(const std::string& name, const ScalarEnsemble& at_one,
                                const ScalarEnsemble& at_lambda, ScalingTransform transform);

/// Two-sample KS between a statistic on paths from 0 and on paths shifted by z.
/// PASS iff not rejected at 0.01.
VerificationReport translation_test(const std::string& name, const ScalarEnsemble& at_zero,
                                    const ScalarEnsemble& at_z);

/// Turns a test that is expected to reject into a PASS/FAIL power check.
VerificationReport expect_rejection(VerificationReport report);

/// KS distance between lambda^{tau-1} int_0^lambda f(X) ds (one ensemble per
/// ladder rung) and f_bar L(0,1). PASS iff the distance strictly decreases
/// along the ladder and ends below `final_threshold`.
inline constexpr double kLimitFinalThreshold = 0.05;
VerificationReport first_order_limit_test(const std::string& name, const std::vector<double>& ladder,
                                          const std::vector<std::vector<double>>& scaled_functionals,
                                          const std::vector<double>& scaled_local_time,
                                          double final_threshold = kLimitFinalThreshold);

/// Per-replicate series of a nondecreasing quantity (L(0,t) or int f / f_bar).
struct SeriesEnsemble {
  Eigen::VectorXd t_grid;
  std::vector<Eigen::VectorXd> series;
};

/// Ratio band around the LIL bracket: PASS inside [0.5, 1.3], INCONCLUSIVE
/// inside [0.2, 2.0], FAIL outside.
struct LilBand {
  double pass_lo = 0.5;
  double pass_hi = 1.3;
  double hard_lo = 0.2;
  double hard_hi = 2.0;
};

/// R(t) = L(0,t) / (t^{1-tau} (loglog t)^tau); statistic is the 0.9-quantile
/// over replicates of max_{t in window} R(t). Window must start above e^2.
VerificationReport lil_statistic(const std::string& name, const SeriesEnsemble& ensemble, double tau,
                                 ProcessKind kind, double window_lo, double window_hi, LilBand band = {});

/// PASS iff |a - b| / b <= tolerance for the statistics of two LIL reports.
inline constexpr double kLilPairedTolerance = 0.10;
VerificationReport lil_paired_test(const std::string& name, const VerificationReport& functional_report,
                                   const VerificationReport& local_time_report,
                                   double tolerance = kLilPairedTolerance);

}  // namespace fbmlt
