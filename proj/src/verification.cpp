#include "fbmlt/verification.hpp"

#include "fbmlt/errors.hpp"
#include "fbmlt/special.hpp"
#include "fbmlt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fbmlt {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Decision ks_decision(const KsResult& ks) { return ks.p_value < kTestLevel ? Decision::Fail : Decision::Pass; }

}  // namespace

LilConstants lil_constants(double tau, ProcessKind kind) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("lil_constants: tau must lie in (0,1)");
  LilConstants c;
  c.tau = tau;
  c.delta_tau = std::sqrt(2.0 * tau) * std::pow(2.0, tau) / std::sqrt(beta_fn(1.0 - tau, tau + 0.5));
  c.theta0 = tau * std::pow(std::pow(1.0 - tau, 1.0 - tau) / gamma_fn(1.0 - tau), 1.0 / tau);
  const double inv_two_tau = 1.0 / (2.0 * tau);
  c.theta_lo = std::pow(std::numbers::pi * c.delta_tau * c.delta_tau / tau, inv_two_tau) * c.theta0;
  c.theta_hi = std::pow(2.0 * std::numbers::pi, inv_two_tau) * c.theta0;
  c.c_tau = kind == ProcessKind::Fbm ? 1.0 : c.delta_tau;
  c.limsup_lo = c.c_tau * std::pow(c.theta_hi, -tau);
  c.limsup_hi = c.c_tau * std::pow(c.theta_lo, -tau);
  c.ordered = c.theta_lo <= c.theta_hi * (1.0 + 1e-12);
  return c;
}

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Pass: return "PASS";
    case Decision::Fail: return "FAIL";
    case Decision::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

VerificationReport scaling_test(const std::string& name, const ScalarEnsemble& at_one, const ScalarEnsemble& at_lambda,
                                ScalingTransform transform) {
  if (at_one.tau != at_lambda.tau) throw DomainError("scaling_test: ensembles have different tau");
  if (!(transform.lambda > 0.0)) throw DomainError("scaling_test: lambda must be positive");
  const double factor = std::pow(transform.lambda, transform.exponent);
  std::vector<double> scaled(at_lambda.values.size());
  std::transform(at_lambda.values.begin(), at_lambda.values.end(), scaled.begin(), [&](double v) { return factor * v; });
  const auto ks = ks_two_sample(at_one.values, scaled);
  VerificationReport r;
  r.name = name;
  r.statistic = ks.statistic;
  r.threshold = kTestLevel;
  r.p_value = ks.p_value;
  r.decision = ks_decision(ks);
  r.n_replicates = std::min(at_one.values.size(), at_lambda.values.size());
  r.metadata["lambda"] = format_number(transform.lambda);
  r.metadata["exponent"] = format_number(transform.exponent);
  r.metadata["tau"] = format_number(at_one.tau);
  r.metadata["rule"] = "two-sample KS, PASS iff p >= 0.01";
  return r;
}

VerificationReport translation_test(const std::string& name, const ScalarEnsemble& at_zero, const ScalarEnsemble& at_z) {
  if (at_zero.tau != at_z.tau) throw DomainError("translation_test: ensembles have different tau");
  const auto ks = ks_two_sample(at_zero.values, at_z.values);
  VerificationReport r;
  r.name = name;
  r.statistic = ks.statistic;
  r.threshold = kTestLevel;
  r.p_value = ks.p_value;
  r.decision = ks_decision(ks);
  r.n_replicates = std::min(at_zero.values.size(), at_z.values.size());
  r.metadata["tau"] = format_number(at_zero.tau);
  r.metadata["rule"] = "two-sample KS, PASS iff p >= 0.01";
  return r;
}

VerificationReport expect_rejection(VerificationReport report) {
  report.decision = report.p_value < kTestLevel ? Decision::Pass : Decision::Fail;
  report.metadata["rule"] = "power check, PASS iff KS rejects at 0.01";
  return report;
}

VerificationReport first_order_limit_test(const std::string& name, const std::vector<double>& ladder,
                                          const std::vector<std::vector<double>>& scaled_functionals,
                                          const std::vector<double>& scaled_local_time, double final_threshold) {
  if (ladder.empty() || ladder.size() != scaled_functionals.size())
    throw DomainError("first_order_limit_test: one ensemble per ladder rung required");
  VerificationReport r;
  r.name = name;
  r.threshold = final_threshold;
  r.n_replicates = scaled_local_time.size();
  std::vector<double> distances;
  double last_p = 1.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto ks = ks_two_sample(scaled_functionals[i], scaled_local_time);
    distances.push_back(ks.statistic);
    last_p = ks.p_value;
    r.metadata["ks_rung" + std::to_string(i) + "_lambda_" + format_number(ladder[i])] = format_number(ks.statistic);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < distances.size(); ++i) decreasing = decreasing && distances[i] < distances[i - 1];
  r.statistic = distances.back();
  r.p_value = last_p;
  r.decision = (decreasing && r.statistic < final_threshold) ? Decision::Pass : Decision::Fail;
  r.metadata["strictly_decreasing"] = decreasing ? "true" : "false";
  r.metadata["rule"] = "KS distance strictly decreasing and final < threshold";
  return r;
}

VerificationReport lil_statistic(const std::string& name, const SeriesEnsemble& ensemble, double tau, ProcessKind kind,
                                 double window_lo, double window_hi, LilBand band) {
  if (!(window_lo > std::exp(2.0)) || !(window_hi > window_lo))
    throw DomainError("lil_statistic: window too short (needs e^2 < lo < hi so loglog t > 0)");
  if (ensemble.series.empty()) throw DomainError("lil_statistic: empty ensemble");
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < ensemble.t_grid.size(); ++j) {
    const double t = ensemble.t_grid(j);
    if (t >= window_lo * (1.0 - 1e-12) && t <= window_hi * (1.0 + 1e-12)) cols.push_back(j);
  }
  if (cols.empty()) throw DomainError("lil_statistic: no grid times inside the window");

  std::vector<double> norm(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double t = ensemble.t_grid(cols[c]);
    norm[c] = std::pow(t, 1.0 - tau) * std::pow(std::log(std::log(t)), tau);
  }
  std::vector<double> maxima;
  maxima.reserve(ensemble.series.size());
  for (const auto& s : ensemble.series) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cols.size(); ++c) best = std::max(best, s(cols[c]) / norm[c]);
    maxima.push_back(best);
  }

  const LilConstants constants = lil_constants(tau, kind);
  double lo = constants.limsup_lo;
  double hi = constants.limsup_hi;
  if (kind == ProcessKind::RiemannLiouville) {
    // Unit-normalized RL representation: widen by delta_tau^{+-1}.
    lo *= std::min(constants.delta_tau, 1.0 / constants.delta_tau);
    hi *= std::max(constants.delta_tau, 1.0 / constants.delta_tau);
  }

  VerificationReport r;
  r.name = name;
  r.statistic = quantile(maxima, 0.9);
  r.threshold = hi;
  r.n_replicates = maxima.size();
  r.p_value = std::numeric_limits<double>::quiet_NaN();
  if (r.statistic >= band.pass_lo * lo && r.statistic <= band.pass_hi * hi) {
    r.decision = Decision::Pass;
  } else if (r.statistic >= band.hard_lo * lo && r.statistic <= band.hard_hi * hi) {
    r.decision = Decision::Inconclusive;
  } else {
    r.decision = Decision::Fail;
  }
  r.metadata["bracket_lo"] = format_number(lo);
  r.metadata["bracket_hi"] = format_number(hi);
  r.metadata["ratio_to_bracket_hi"] = format_number(r.statistic / hi);
  r.metadata["window"] = format_number(window_lo) + ".." + format_number(window_hi);
  r.metadata["rule"] = "0.9-quantile of running max; PASS in [0.5,1.3]x bracket, FAIL outside [0.2,2.0]x";
  return r;
}

VerificationReport lil_paired_test(const std::string& name, const VerificationReport& functional_report,
                                   const VerificationReport& local_time_report, double tolerance) {
  VerificationReport r;
  r.name = name;
  r.threshold = tolerance;
  r.n_replicates = std::min(functional_report.n_replicates, local_time_report.n_replicates);
  r.statistic = std::abs(functional_report.statistic - local_time_report.statistic) / local_time_report.statistic;
  r.p_value = std::numeric_limits<double>::quiet_NaN();
  r.decision = r.statistic <= tolerance ? Decision::Pass : Decision::Fail;
  r.metadata["functional_statistic"] = format_number(functional_report.statistic);
  r.metadata["local_time_statistic"] = format_number(local_time_report.statistic);
  r.metadata["rule"] = "relative difference of paired LIL statistics <= tolerance";
  return r;
}

}  // namespace fbmlt
