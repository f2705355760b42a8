#include "fbmlt/process.hpp"

#include "fbmlt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace fbmlt {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

void ProcessSpec::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (n_steps == 0) throw DomainError("n_steps must be positive");
  if (kind == ProcessKind::Fbm) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("fBm index H must lie in (0,1)");
    if (sampler == SamplerKind::KernelConv) throw DomainError("kernel_conv sampler is only valid for the RL process");
    if (sampler == SamplerKind::Circulant && !is_power_of_two(n_steps))
      throw DomainError("circulant sampler needs n_steps a power of two");
  } else {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("RL index beta must be positive");
    if (sampler == SamplerKind::Circulant) throw DomainError("circulant sampler is only valid for fBm");
  }
}

Eigen::VectorXd uniform_times(double horizon, std::size_t n_steps) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(n_steps) + 1);
  for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = static_cast<double>(i) * horizon / static_cast<double>(n_steps);
  return t;
}

std::size_t time_index(const PathGrid& path, double t) {
  const double pos = t / path.dt();
  const double snapped = std::floor(pos + 1e-9 * std::max(1.0, std::abs(pos)));
  const double clamped = std::clamp(snapped, 0.0, static_cast<double>(path.spec.n_steps));
  return static_cast<std::size_t>(clamped);
}

PathGrid shift_path(const PathGrid& path, double s) {
  if (s < 0.0) throw DomainError("shift_path: s must be non-negative");
  const double pos = s / path.dt();
  auto start = static_cast<std::size_t>(std::ceil(pos - 1e-9 * std::max(1.0, pos)));
  start = std::min(start, path.spec.n_steps);
  PathGrid out;
  out.spec = path.spec;
  out.seed = path.seed;
  out.cholesky_fallback = path.cholesky_fallback;
  const std::size_t remaining = path.spec.n_steps - start;
  out.spec.n_steps = remaining;
  out.spec.horizon = static_cast<double>(remaining) * path.dt();
  const auto len = static_cast<Eigen::Index>(remaining) + 1;
  out.values = path.values.segment(static_cast<Eigen::Index>(start), len);
  out.times.resize(len);
  for (Eigen::Index i = 0; i < len; ++i) out.times(i) = static_cast<double>(i) * path.dt();
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string to_string(ProcessKind kind) { return kind == ProcessKind::Fbm ? "fbm" : "rl"; }

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Cholesky: return "cholesky";
    case SamplerKind::Circulant: return "circulant";
    case SamplerKind::KernelConv: return "kernel_conv";
  }
  return "unknown";
}

ProcessKind parse_process_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "fbm") return ProcessKind::Fbm;
  if (s == "rl" || s == "riemann_liouville") return ProcessKind::RiemannLiouville;
  throw DomainError("unknown process kind: " + std::string(text));
}

SamplerKind parse_sampler_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "cholesky") return SamplerKind::Cholesky;
  if (s == "circulant") return SamplerKind::Circulant;
  if (s == "kernel_conv" || s == "kernel") return SamplerKind::KernelConv;
  throw DomainError("unknown sampler: " + std::string(text));
}

}  // namespace fbmlt
