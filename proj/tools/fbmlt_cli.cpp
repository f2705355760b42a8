// fbmlt: sample self-similar Gaussian paths, estimate local times and run the
// verification checks. Exit status: 0 all checks pass, 1 some check failed,
// 2 invalid configuration or usage, 3 numerical failure.

#include "fbmlt/checks.hpp"
#include "fbmlt/config.hpp"
#include "fbmlt/errors.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/local_time.hpp"
#include "fbmlt/rng.hpp"
#include "fbmlt/samplers.hpp"
#include "fbmlt/verification.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace fbmlt;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::string format = "csv";
  std::optional<std::size_t> replicates;
  std::optional<std::string> kind;
  std::optional<double> tau;
  std::optional<double> horizon;
  std::optional<std::size_t> n_steps;
  std::optional<std::string> sampler;
  std::optional<std::string> checks;
  bool quiet = false;
};

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.output_dir = *o.out;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.kind) cfg.process.kind = parse_process_kind(*o.kind);
  if (o.tau) cfg.process.tau = *o.tau;
  if (o.horizon) cfg.process.horizon = *o.horizon;
  if (o.n_steps) cfg.process.n_steps = *o.n_steps;
  if (o.sampler) cfg.process.sampler = parse_sampler_kind(*o.sampler);
  if (o.checks) {
    cfg.checks.clear();
    std::string item;
    for (char c : *o.checks + ",") {
      if (c == ',') {
        if (!item.empty()) cfg.checks.push_back(item);
        item.clear();
      } else if (c != ' ') {
        item += c;
      }
    }
  }
  if (o.format != "csv") throw DomainError("unsupported --format '" + o.format + "' (only csv)");
  cfg.validate();
  return cfg;
}

CheckOptions options_for(const ExperimentConfig& cfg, bool quiet) {
  CheckOptions opts = cfg.check_options();
  opts.artifact_dir = cfg.output_dir;
  if (!quiet) opts.progress = [](std::string_view msg) { std::cerr << "[fbmlt] " << msg << '\n'; };
  return opts;
}

void write_paths(const ExperimentConfig& cfg, std::size_t count) {
  const PathSampler sampler(cfg.process);
  for (std::size_t r = 0; r < count; ++r) {
    const PathGrid path = sampler.sample(derive_seed(cfg.master_seed, r));
    write_file(cfg.output_dir / "paths" / ("path_" + std::to_string(r) + ".csv"),
               [&](std::ostream& os) { write_path_csv(os, path); });
  }
}

int emit_reports(const ExperimentConfig& cfg, const std::vector<VerificationReport>& reports) {
  write_file(cfg.output_dir / "reports.csv", [&](std::ostream& os) { write_reports_csv(os, reports); });
  write_file(cfg.output_dir / "reports.txt", [&](std::ostream& os) { write_reports_text(os, reports); });
  write_file(cfg.output_dir / "summary.txt", [&](std::ostream& os) { write_summary(os, reports); });
  write_summary(std::cout, reports);
  for (const auto& r : reports)
    if (r.decision == Decision::Fail) return kExitFail;
  return 0;
}

std::vector<VerificationReport> run_checks(const ExperimentConfig& cfg, const std::vector<std::string>& names,
                                           bool quiet) {
  const CheckOptions opts = options_for(cfg, quiet);
  std::vector<VerificationReport> reports;
  for (const auto& name : names) {
    auto part = run_check(name, opts);
    reports.insert(reports.end(), part.begin(), part.end());
  }
  return reports;
}

int cmd_simulate(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o);
  write_paths(cfg, cfg.replicates);
  std::cout << "paths " << cfg.replicates << ' ' << (cfg.output_dir / "paths").string() << '\n';
  return 0;
}

int cmd_localtime(const Overrides& o, const std::string& estimator, std::size_t levels, std::size_t times,
                  std::size_t n_freq) {
  const ExperimentConfig cfg = resolve(o);
  const PathSampler sampler(cfg.process);
  const PathGrid path = sampler.sample(derive_seed(cfg.master_seed, 0));
  const Eigen::VectorXd t_grid = default_time_grid(path, times, cfg.process.horizon);
  LocalTimeField field;
  if (estimator == "eps") {
    field = occupation_field(path, t_grid, cfg.process.n_steps, levels);
  } else if (estimator == "fourier") {
    const double eps = default_bandwidth(path);
    const Eigen::VectorXd x_grid = default_level_grid(path, eps, levels);
    // Cutoff pi / eps matches the resolution of the occupation estimator.
    field = local_time_field(path, x_grid, t_grid, LocalTimeEstimator::Fourier, std::numbers::pi / eps, n_freq);
  } else {
    throw DomainError("unknown estimator '" + estimator + "' (eps or fourier)");
  }
  write_file(cfg.output_dir / "path.csv", [&](std::ostream& os) { write_path_csv(os, path); });
  write_file(cfg.output_dir / "field.csv", [&](std::ostream& os) { write_field_csv(os, field); });
  write_file(cfg.output_dir / "field_meta.txt", [&](std::ostream& os) { write_field_metadata(os, field); });
  std::cout << "field " << field.x_grid.size() << 'x' << field.t_grid.size() << " clipped " << field.clipped << '\n';
  return 0;
}

int cmd_verify(const Overrides& o) {
  const ExperimentConfig cfg = resolve(o);
  write_paths(cfg, std::min(cfg.write_paths, cfg.replicates));
  return emit_reports(cfg, run_checks(cfg, cfg.checks, o.quiet));
}

int cmd_named(const Overrides& o, const std::string& check) {
  const ExperimentConfig cfg = resolve(o);
  return emit_reports(cfg, run_checks(cfg, {check}, o.quiet));
}

int cmd_constants(const Overrides& o, std::vector<double> taus) {
  if (o.format != "csv") throw DomainError("unsupported --format '" + o.format + "' (only csv)");
  if (taus.empty())
    for (int i = 1; i <= 9; ++i) taus.push_back(0.1 * i);
  auto table = [&](std::ostream& os) {
    os << "tau,kind,delta_tau,theta0,theta_lo,theta_hi,c_tau,limsup_lo,limsup_hi,ordered\n";
    for (double tau : taus) {
      for (ProcessKind kind : {ProcessKind::Fbm, ProcessKind::RiemannLiouville}) {
        const LilConstants c = lil_constants(tau, kind);
        os << format_double(tau) << ',' << to_string(kind) << ',' << format_double(c.delta_tau) << ','
           << format_double(c.theta0) << ',' << format_double(c.theta_lo) << ',' << format_double(c.theta_hi) << ','
           << format_double(c.c_tau) << ',' << format_double(c.limsup_lo) << ',' << format_double(c.limsup_hi) << ','
           << (c.ordered ? "true" : "false") << '\n';
      }
    }
  };
  table(std::cout);
  if (o.out) write_file(std::filesystem::path(*o.out) / "constants.csv", table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbmlt: local times and additive functionals of self-similar Gaussian processes"};
  app.require_subcommand(1);
  Overrides o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "Artifact format (csv)");
    sub->add_option("--replicates", o.replicates, "Replicates per ensemble");
    sub->add_option("--kind", o.kind, "fbm or rl");
    sub->add_option("--tau", o.tau, "Self-similarity index");
    sub->add_option("--horizon", o.horizon, "Path horizon T");
    sub->add_option("--n-steps", o.n_steps, "Grid steps");
    sub->add_option("--sampler", o.sampler, "cholesky, circulant or kernel_conv");
    sub->add_flag("--quiet", o.quiet, "No progress on stderr");
  };

  auto* simulate = app.add_subcommand("simulate", "Sample paths and write them as CSV");
  common(simulate);
  std::string estimator = "eps";
  std::size_t levels = 257;
  std::size_t times = 65;
  std::size_t n_freq = 4096;
  auto* localtime = app.add_subcommand("localtime", "Local-time field of one path");
  common(localtime);
  localtime->add_option("--estimator", estimator, "eps or fourier");
  localtime->add_option("--levels", levels, "Number of levels");
  localtime->add_option("--times", times, "Number of field times");
  localtime->add_option("--n-freq", n_freq, "Frequency intervals (fourier)");
  auto* verify = app.add_subcommand("verify", "Run the configured checks");
  common(verify);
  verify->add_option("--checks", o.checks, "Comma-separated check names");
  auto* lil = app.add_subcommand("lil", "LIL statistics for local time and the additive functional");
  common(lil);
  auto* limit = app.add_subcommand("limit", "First-order limit along the lambda ladder");
  common(limit);
  std::vector<double> taus;
  auto* constants = app.add_subcommand("constants", "LIL constant table over a tau sweep");
  constants->add_option("--tau", taus, "Values of tau (default 0.1..0.9)");
  constants->add_option("--out", o.out, "Output directory");
  constants->add_option("--format", o.format, "Artifact format (csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*localtime) return cmd_localtime(o, estimator, levels, times, n_freq);
    if (*verify) return cmd_verify(o);
    if (*lil) return cmd_named(o, "lil_paired");
    if (*limit) return cmd_named(o, "first_order_limit");
    if (*constants) return cmd_constants(o, taus);
  } catch (const DomainError& e) {
    std::cerr << "fbmlt: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "fbmlt: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "fbmlt: " << e.what() << '\n';
    return kExitNumerical;
  }
  std::cerr << app.help();
  return kExitConfig;
}
