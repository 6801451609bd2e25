#include "wardwalk/config.hpp"

#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "wardwalk/error.hpp"
#include "wardwalk/io.hpp"

namespace wardwalk {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& stanza,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + stanza);
    }
  }
}

const json& stanza_object(const json& root, const char* key) {
  const json& value = root.at(key);
  if (!value.is_object()) {
    throw ConfigError(std::string("'") + key + "' must be an object");
  }
  return value;
}

std::string nonempty_string(const json& obj, const char* key,
                            const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw ConfigError(stanza + "." + key + " must be a nonempty string");
  }
  return value.get<std::string>();
}

double finite_double(const json& obj, const char* key, const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_number()) {
    throw ConfigError(stanza + "." + key + " must be a finite number");
  }
  const double d = value.get<double>();
  if (!std::isfinite(d)) {
    throw ConfigError(stanza + "." + key + " must be a finite number");
  }
  return d;
}

long long integer_field(const json& obj, const char* key,
                        const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_number_integer()) {
    throw ConfigError(stanza + "." + key + " must be an integer");
  }
  return value.get<long long>();
}

bool bool_field(const json& obj, const char* key, const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_boolean()) {
    throw ConfigError(stanza + "." + key + " must be a boolean");
  }
  return value.get<bool>();
}

std::vector<double> double_array(const json& obj, const char* key,
                                 const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_array()) {
    throw ConfigError(stanza + "." + key + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_number() || !std::isfinite(item.get<double>())) {
      throw ConfigError(stanza + "." + key + " must be an array of numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

std::vector<int> int_array(const json& obj, const char* key,
                           const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_array()) {
    throw ConfigError(stanza + "." + key + " must be an array of integers");
  }
  std::vector<int> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_number_integer()) {
      throw ConfigError(stanza + "." + key + " must be an array of integers");
    }
    out.push_back(item.get<int>());
  }
  return out;
}

std::vector<std::string> string_array(const json& obj, const char* key,
                                      const std::string& stanza) {
  const json& value = obj.at(key);
  if (!value.is_array()) {
    throw ConfigError(stanza + "." + key + " must be an array of strings");
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_string()) {
      throw ConfigError(stanza + "." + key + " must be an array of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

GridSpec parse_synthetic(const json& obj) {
  check_keys(obj, "input.synthetic",
             {"rows", "cols", "num_districts", "uniform_population", "vote_unit",
              "cell_population", "cell_rep", "cell_dem", "cell_county",
              "seed_assignment", "frozen_districts"});
  if (!obj.contains("rows") || !obj.contains("cols")) {
    throw ConfigError("input.synthetic needs 'rows' and 'cols'");
  }

  GridSpec spec;
  spec.rows = static_cast<int>(integer_field(obj, "rows", "input.synthetic"));
  spec.cols = static_cast<int>(integer_field(obj, "cols", "input.synthetic"));
  if (obj.contains("num_districts")) {
    spec.num_districts =
        static_cast<int>(integer_field(obj, "num_districts", "input.synthetic"));
  }
  if (obj.contains("uniform_population")) {
    spec.uniform_population = finite_double(obj, "uniform_population", "input.synthetic");
  }
  if (obj.contains("vote_unit")) {
    spec.vote_unit = finite_double(obj, "vote_unit", "input.synthetic");
  }
  if (obj.contains("cell_population")) {
    spec.cell_population = double_array(obj, "cell_population", "input.synthetic");
  }
  if (obj.contains("cell_rep")) {
    spec.cell_rep = double_array(obj, "cell_rep", "input.synthetic");
  }
  if (obj.contains("cell_dem")) {
    spec.cell_dem = double_array(obj, "cell_dem", "input.synthetic");
  }
  if (obj.contains("cell_county")) {
    spec.cell_county = string_array(obj, "cell_county", "input.synthetic");
  }
  if (obj.contains("seed_assignment")) {
    spec.seed_assignment = int_array(obj, "seed_assignment", "input.synthetic");
  }
  if (obj.contains("frozen_districts")) {
    spec.frozen_districts = int_array(obj, "frozen_districts", "input.synthetic");
  }
  return spec;
}

void parse_input(const json& obj, RunConfig& config) {
  check_keys(obj, "input", {"nodes", "edges", "num_districts", "synthetic"});
  const bool has_synthetic = obj.contains("synthetic");
  const bool has_files = obj.contains("nodes") || obj.contains("edges") ||
                         obj.contains("num_districts");
  if (has_synthetic == has_files) {
    throw ConfigError(
        "config must have exactly one input source: either input.synthetic or "
        "input.nodes/edges/num_districts");
  }

  if (has_synthetic) {
    const json& synthetic = obj.at("synthetic");
    if (!synthetic.is_object()) {
      throw ConfigError("input.synthetic must be an object");
    }
    config.use_synthetic = true;
    config.synthetic = parse_synthetic(synthetic);
    return;
  }

  for (const char* key : {"nodes", "edges", "num_districts"}) {
    if (!obj.contains(key)) {
      throw ConfigError(std::string("input.") + key + " is required for a graph input");
    }
  }
  config.graph.nodes_path = nonempty_string(obj, "nodes", "input");
  config.graph.edges_path = nonempty_string(obj, "edges", "input");
  const long long districts = integer_field(obj, "num_districts", "input");
  if (districts < 1) {
    throw ConfigError("input.num_districts must be at least 1");
  }
  config.graph.num_districts = static_cast<int>(districts);
}

void parse_validity(const json& obj, ValidityConfig& validity) {
  check_keys(obj, "validity",
             {"pop_tolerance_wards", "compactness_mode", "compactness_budget",
              "enforce_counties", "enforce_mm"});
  if (obj.contains("pop_tolerance_wards")) {
    validity.pop_tolerance_wards = finite_double(obj, "pop_tolerance_wards", "validity");
    if (validity.pop_tolerance_wards <= 0.0) {
      throw ConfigError("validity.pop_tolerance_wards must be positive");
    }
  }
  if (obj.contains("compactness_mode")) {
    validity.compactness_mode =
        compactness_mode_from_string(nonempty_string(obj, "compactness_mode", "validity"));
  }
  if (obj.contains("compactness_budget")) {
    validity.compactness_budget = finite_double(obj, "compactness_budget", "validity");
    if (validity.compactness_budget <= 0.0) {
      throw ConfigError("validity.compactness_budget must be positive");
    }
  }
  if (obj.contains("enforce_counties")) {
    validity.enforce_counties = bool_field(obj, "enforce_counties", "validity");
  }
  if (obj.contains("enforce_mm")) {
    validity.enforce_mm = bool_field(obj, "enforce_mm", "validity");
  }
}

void parse_chain(const json& obj, ChainConfig& chain) {
  check_keys(obj, "chain",
             {"steps", "rng_seed", "lazy", "record_every", "reservoir_capacity"});
  if (obj.contains("steps")) {
    chain.steps = integer_field(obj, "steps", "chain");
  }
  if (chain.steps < 1) {
    throw ConfigError("chain.steps must be at least 1");
  }
  if (obj.contains("rng_seed")) {
    const json& value = obj.at("rng_seed");
    if (!value.is_number_unsigned() && !(value.is_number_integer() &&
                                         value.get<long long>() >= 0)) {
      throw ConfigError("chain.rng_seed must be a nonnegative integer");
    }
    chain.rng_seed = value.get<std::uint64_t>();
  }
  if (obj.contains("lazy")) {
    chain.lazy = bool_field(obj, "lazy", "chain");
  }
  if (obj.contains("record_every")) {
    chain.record_every = integer_field(obj, "record_every", "chain");
    if (chain.record_every < 1) {
      throw ConfigError("chain.record_every must be at least 1");
    }
  }
  if (obj.contains("reservoir_capacity")) {
    const long long capacity = integer_field(obj, "reservoir_capacity", "chain");
    if (capacity < 1) {
      throw ConfigError("chain.reservoir_capacity must be at least 1");
    }
    chain.reservoir_capacity = static_cast<std::size_t>(capacity);
  }
}

void parse_output(const json& obj, RunConfig& config) {
  check_keys(obj, "output",
             {"report", "trace", "histogram_csv", "histogram_svg", "histogram_bins"});
  if (!obj.contains("report")) {
    throw ConfigError("output.report is required");
  }
  config.report_path = nonempty_string(obj, "report", "output");
  if (obj.contains("trace")) {
    config.trace_path = nonempty_string(obj, "trace", "output");
  }
  if (obj.contains("histogram_csv")) {
    config.histogram_csv_path = nonempty_string(obj, "histogram_csv", "output");
  }
  if (obj.contains("histogram_svg")) {
    config.histogram_svg_path = nonempty_string(obj, "histogram_svg", "output");
  }
  if (obj.contains("histogram_bins")) {
    const long long bins = integer_field(obj, "histogram_bins", "output");
    if (bins < 1) {
      throw ConfigError("output.histogram_bins must be at least 1");
    }
    config.histogram_bins = static_cast<int>(bins);
  }
}

std::string resolve_against(const std::string& path,
                            const std::filesystem::path& base) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base.empty()) return path;
  return (base / p).lexically_normal().string();
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  const json root = json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw ConfigError("config is not a JSON object");
  }
  check_keys(root, "config", {"input", "validity", "chain", "output"});
  for (const char* key : {"input", "output"}) {
    if (!root.contains(key)) {
      throw ConfigError(std::string("config needs an '") + key + "' stanza");
    }
  }

  RunConfig config;
  parse_input(stanza_object(root, "input"), config);
  if (root.contains("validity")) {
    parse_validity(stanza_object(root, "validity"), config.validity);
  }
  if (root.contains("chain")) {
    parse_chain(stanza_object(root, "chain"), config.chain);
  }
  parse_output(stanza_object(root, "output"), config);
  return config;
}

void resolve_run_config_paths(RunConfig& config,
                              const std::filesystem::path& config_dir,
                              const std::filesystem::path& out_dir) {
  if (!config.use_synthetic) {
    config.graph.nodes_path = resolve_against(config.graph.nodes_path, config_dir);
    config.graph.edges_path = resolve_against(config.graph.edges_path, config_dir);
  }
  config.report_path = resolve_against(config.report_path, out_dir);
  if (!config.trace_path.empty()) {
    config.trace_path = resolve_against(config.trace_path, out_dir);
  }
  if (!config.histogram_csv_path.empty()) {
    config.histogram_csv_path = resolve_against(config.histogram_csv_path, out_dir);
  }
  if (!config.histogram_svg_path.empty()) {
    config.histogram_svg_path = resolve_against(config.histogram_svg_path, out_dir);
  }
}

RunConfig load_run_config(const std::filesystem::path& config_path) {
  RunConfig config = parse_run_config(read_text_file(config_path.string()));
  const char* out_env = std::getenv("WARDWALK_OUT_DIR");
  resolve_run_config_paths(config, config_path.parent_path(),
                           out_env ? std::filesystem::path(out_env)
                                   : std::filesystem::path());
  return config;
}

}  // namespace wardwalk
