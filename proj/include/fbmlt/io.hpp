#pragma once

#include "fbmlt/functionals.hpp"
#include "fbmlt/local_time.hpp"
#include "fbmlt/process.hpp"
#include "fbmlt/verification.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

namespace fbmlt {

/// "%.17g": round-trips every double.
std::string format_double(double v);

/// Header `t,value`.
void write_path_csv(std::ostream& os, const PathGrid& path);
/// Header `x,t,L`, row-major over (x, t).
void write_field_csv(std::ostream& os, const LocalTimeField& field);
/// Sidecar `key = value` text describing the estimator and its source.
void write_field_metadata(std::ostream& os, const LocalTimeField& field);
/// Header `replicate,t,J`.
void write_residual_csv(std::ostream& os, const std::vector<ResidualSeries>& series);
void write_rate_fit_text(std::ostream& os, const std::string& name, const RateFit& fit);

/// Header `name,statistic,threshold,decision,p_value,n`.
void write_reports_csv(std::ostream& os, const std::vector<VerificationReport>& reports);
/// One `[name]` section per report with its fields and metadata.
void write_reports_text(std::ostream& os, const std::vector<VerificationReport>& reports);
/// `name decision`, one per line.
void write_summary(std::ostream& os, const std::vector<VerificationReport>& reports);

/// Creates parent directories; binary mode so bytes match across platforms.
void open_for_write(const std::filesystem::path& path, std::ofstream& out);

/// Opens `path` for writing and hands the stream to `fn`.
template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out;
  open_for_write(path, out);
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace fbmlt
