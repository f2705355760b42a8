#include "fbmlt/checks.hpp"
#include "fbmlt/config.hpp"
#include "fbmlt/errors.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/samplers.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fbmlt;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("config file round trip") {
  const auto cfg = parse(R"(
[process]
kind = rl
tau = 0.7
horizon = 2
n_steps = 512
sampler = kernel_conv

[function]
id = compact_bump
params = 1, 0, 0.5

[experiment]
replicates = 12
master_seed = 99
lambda_ladder = 1, 2, 8
checks = scaling, translation
threads = 3

[checks]
field_bandwidth_factor = 2
lil_steps = 1024
)");
  CHECK(cfg.process.kind == ProcessKind::RiemannLiouville);
  CHECK(cfg.process.tau == 0.7);
  CHECK(cfg.process.n_steps == 512);
  CHECK(cfg.process.sampler == SamplerKind::KernelConv);
  CHECK(cfg.function_id == TestFunctionId::CompactBump);
  CHECK(cfg.function_params == std::vector<double>{1.0, 0.0, 0.5});
  CHECK(cfg.checks == std::vector<std::string>{"scaling", "translation"});
  CHECK_NOTHROW(cfg.validate());
  const auto opts = cfg.check_options();
  CHECK(opts.seed == 99);
  CHECK(opts.threads == 3);
  CHECK(opts.replicates == 12);
  CHECK(opts.field_bandwidth_factor == 2.0);
  CHECK(opts.lil_steps == 1024);
  CHECK(opts.ladder == std::vector<double>{1.0, 2.0, 8.0});
}

TEST_CASE("config errors are domain errors") {
  CHECK_THROWS_AS(parse("[process]\ntua = 0.5\n"), DomainError);
  CHECK_THROWS_AS(parse("[nonsense]\na = 1\n"), DomainError);
  CHECK_THROWS_AS(parse("[process]\ntau = half\n"), DomainError);
  CHECK_THROWS_AS(parse("[experiment]\nreplicates = -3\n"), DomainError);
  CHECK_THROWS_AS(parse("[experiment]\nreplicates = 0\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[experiment]\nlambda_ladder = 2, 4\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[experiment]\nlambda_ladder = 1, 4, 4\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[experiment]\nchecks = scalling\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[process]\ntau = 1.2\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[process]\nn_steps = 1000\nsampler = circulant\n").validate(), DomainError);
  CHECK_THROWS_AS(parse("[function]\nid = gaussian_bump\nparams = 1, 0\n").validate(), DomainError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), DomainError);
}

TEST_CASE("check registry") {
  const auto& names = check_names();
  CHECK(names.size() == 10);
  for (const auto& n : names) CHECK(is_check_name(n));
  CHECK_FALSE(is_check_name("nope"));
  CHECK_THROWS_AS(run_check("nope", CheckOptions{}), DomainError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("writers") {
  ProcessSpec s;
  s.n_steps = 4;
  const PathGrid p = sample_path(s, 5);
  std::ostringstream path_csv;
  write_path_csv(path_csv, p);
  std::istringstream lines(path_csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,value");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);

  VerificationReport r;
  r.name = "a,b";
  r.statistic = 0.5;
  r.threshold = 0.01;
  r.decision = Decision::Pass;
  r.p_value = 0.25;
  r.n_replicates = 7;
  r.metadata["tau"] = "0.5";
  std::ostringstream csv;
  write_reports_csv(csv, {r});
  CHECK(csv.str() == "name,statistic,threshold,decision,p_value,n\n\"a,b\",0.5,0.01,PASS,0.25,7\n");
  std::ostringstream sum;
  write_summary(sum, {r});
  CHECK(sum.str() == "a,b PASS\n");
  std::ostringstream txt;
  write_reports_text(txt, {r});
  CHECK(txt.str().find("[a,b]") != std::string::npos);
  CHECK(txt.str().find("tau = 0.5") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "fbmlt_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file(dir / "x.csv", [&](std::ostream& os) { write_summary(os, {r}); });
  std::ifstream back(dir / "x.csv");
  std::getline(back, line);
  CHECK(line == "a,b PASS");
  std::filesystem::remove_all(dir.parent_path());
}
