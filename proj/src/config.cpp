#include "fbmlt/config.hpp"

#include "fbmlt/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace fbmlt {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " is not a number: '" + text + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw DomainError("config: " + key + " is not an unsigned integer: '" + text + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  process.validate();
  if (replicates < 1) throw DomainError("config: replicates must be >= 1");
  if (lambda_ladder.empty() || lambda_ladder.front() != 1.0)
    throw DomainError("config: lambda_ladder must start at 1");
  for (std::size_t i = 1; i < lambda_ladder.size(); ++i)
    if (!(lambda_ladder[i] > lambda_ladder[i - 1])) throw DomainError("config: lambda_ladder must be strictly increasing");
  for (const auto& c : checks)
    if (!is_check_name(c)) throw DomainError("config: unknown check '" + c + "'");
  (void)function();  // validates the parameter count and ranges
}

CheckOptions ExperimentConfig::check_options() const {
  CheckOptions o = knobs;
  o.spec = process;
  o.function = function();
  o.replicates = replicates;
  o.seed = master_seed;
  o.threads = threads;
  o.ladder = lambda_ladder;
  o.progress = nullptr;
  return o;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  const std::set<std::string> sections{"process", "function", "experiment", "checks"};
  for (const auto& [section, body] : tree) {
    if (!sections.count(section)) throw DomainError("config: unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string value = trim(node.get_value<std::string>());
      const std::string where = section + "." + key;
      if (section == "process") {
        if (key == "kind") cfg.process.kind = parse_process_kind(value);
        else if (key == "tau") cfg.process.tau = to_double(where, value);
        else if (key == "horizon") cfg.process.horizon = to_double(where, value);
        else if (key == "n_steps") cfg.process.n_steps = to_u64(where, value);
        else if (key == "sampler") cfg.process.sampler = parse_sampler_kind(value);
        else throw DomainError("config: unknown key " + where);
      } else if (section == "function") {
        if (key == "id") cfg.function_id = parse_test_function_id(value);
        else if (key == "params") cfg.function_params = to_doubles(where, value);
        else throw DomainError("config: unknown key " + where);
      } else if (section == "experiment") {
        if (key == "replicates") cfg.replicates = to_u64(where, value);
        else if (key == "master_seed") cfg.master_seed = to_u64(where, value);
        else if (key == "lambda_ladder") cfg.lambda_ladder = to_doubles(where, value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "checks") cfg.checks = split_list(value);
        else if (key == "threads") cfg.threads = static_cast<unsigned>(to_u64(where, value));
        else if (key == "write_paths") cfg.write_paths = to_u64(where, value);
        else throw DomainError("config: unknown key " + where);
      } else {
        CheckOptions& k = cfg.knobs;
        if (key == "scaling_lambdas") k.scaling_lambdas = to_doubles(where, value);
        else if (key == "translation_shift") k.translation_shift = to_double(where, value);
        else if (key == "field_bandwidth_factor") k.field_bandwidth_factor = to_double(where, value);
        else if (key == "equivalence_steps") k.equivalence_steps = to_u64(where, value);
        else if (key == "pathwise_paths") k.pathwise_paths = to_u64(where, value);
        else if (key == "strong_horizon") k.strong_horizon = to_double(where, value);
        else if (key == "strong_steps") k.strong_steps = to_u64(where, value);
        else if (key == "strong_replicates") k.strong_replicates = to_u64(where, value);
        else if (key == "strong_window_lo") k.strong_window_lo = to_double(where, value);
        else if (key == "lil_horizon") k.lil_horizon = to_double(where, value);
        else if (key == "lil_steps") k.lil_steps = to_u64(where, value);
        else if (key == "lil_replicates") k.lil_replicates = to_u64(where, value);
        else if (key == "lil_window_lo") k.lil_window_lo = to_double(where, value);
        else throw DomainError("config: unknown key " + where);
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot read " + path.string());
  return parse_config(in);
}

}  // namespace fbmlt
