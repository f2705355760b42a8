#include "fbmlt/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fbmlt {

namespace {

std::string estimator_name(LocalTimeEstimator e) {
  return e == LocalTimeEstimator::EpsOccupation ? "eps_occupation" : "fourier";
}

// CSV fields here never contain commas except free-form names; quote those.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void open_for_write(const std::filesystem::path& path, std::ofstream& out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
}

void write_path_csv(std::ostream& os, const PathGrid& path) {
  os << "t,value\n";
  for (Eigen::Index i = 0; i < path.times.size(); ++i)
    os << format_double(path.times(i)) << ',' << format_double(path.values(i)) << '\n';
}

void write_field_csv(std::ostream& os, const LocalTimeField& field) {
  os << "x,t,L\n";
  for (Eigen::Index i = 0; i < field.x_grid.size(); ++i)
    for (Eigen::Index j = 0; j < field.t_grid.size(); ++j)
      os << format_double(field.x_grid(i)) << ',' << format_double(field.t_grid(j)) << ','
         << format_double(field.values(i, j)) << '\n';
}

void write_field_metadata(std::ostream& os, const LocalTimeField& field) {
  os << "[field]\n";
  os << "estimator = " << estimator_name(field.estimator) << '\n';
  os << "bandwidth = " << format_double(field.bandwidth) << '\n';
  if (field.estimator == LocalTimeEstimator::Fourier) os << "n_freq = " << field.n_freq << '\n';
  os << "clipped = " << field.clipped << '\n';
  os << "levels = " << field.x_grid.size() << '\n';
  os << "times = " << field.t_grid.size() << '\n';
  os << "\n[process]\n";
  os << "kind = " << to_string(field.source_spec.kind) << '\n';
  os << "tau = " << format_double(field.source_spec.tau) << '\n';
  os << "horizon = " << format_double(field.source_spec.horizon) << '\n';
  os << "n_steps = " << field.source_spec.n_steps << '\n';
  os << "sampler = " << to_string(field.source_spec.sampler) << '\n';
}

void write_residual_csv(std::ostream& os, const std::vector<ResidualSeries>& series) {
  os << "replicate,t,J\n";
  for (std::size_t r = 0; r < series.size(); ++r)
    for (Eigen::Index j = 0; j < series[r].t_grid.size(); ++j)
      os << r << ',' << format_double(series[r].t_grid(j)) << ',' << format_double(series[r].residual(j)) << '\n';
}

void write_rate_fit_text(std::ostream& os, const std::string& name, const RateFit& fit) {
  os << '[' << name << "]\n";
  os << "slope = " << format_double(fit.slope) << '\n';
  os << "intercept = " << format_double(fit.intercept) << '\n';
  os << "ci_lo = " << format_double(fit.ci_lo) << '\n';
  os << "ci_hi = " << format_double(fit.ci_hi) << '\n';
  os << "points = " << fit.points << "\n\n";
}

void write_reports_csv(std::ostream& os, const std::vector<VerificationReport>& reports) {
  os << "name,statistic,threshold,decision,p_value,n\n";
  for (const auto& r : reports)
    os << csv_field(r.name) << ',' << format_double(r.statistic) << ',' << format_double(r.threshold) << ','
       << to_string(r.decision) << ',' << format_double(r.p_value) << ',' << r.n_replicates << '\n';
}

void write_reports_text(std::ostream& os, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    os << '[' << r.name << "]\n";
    os << "statistic = " << format_double(r.statistic) << '\n';
    os << "threshold = " << format_double(r.threshold) << '\n';
    os << "decision = " << to_string(r.decision) << '\n';
    os << "p_value = " << format_double(r.p_value) << '\n';
    os << "n = " << r.n_replicates << '\n';
    for (const auto& [k, v] : r.metadata) os << k << " = " << v << '\n';
    os << '\n';
  }
}

void write_summary(std::ostream& os, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) os << r.name << ' ' << to_string(r.decision) << '\n';
}

}  // namespace fbmlt
