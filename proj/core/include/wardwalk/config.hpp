#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wardwalk/chain.hpp"
#include "wardwalk/constraints.hpp"
#include "wardwalk/gridkit.hpp"

namespace wardwalk {

struct GraphInput {
  std::string nodes_path;
  std::string edges_path;
  int num_districts = 0;
};

// One declarative run description: where the instance comes from, which
// validity regime and chain settings to use, and where to write results.
struct RunConfig {
  bool use_synthetic = false;
  GraphInput graph;
  GridSpec synthetic;
  ValidityConfig validity;
  ChainConfig chain;
  std::string report_path;
  std::string trace_path;
  std::string histogram_csv_path;
  std::string histogram_svg_path;
  int histogram_bins = 40;
};

// Parses and validates the JSON run configuration. Throws ConfigError on any
// schema violation, including steps < 1 and unknown keys. Paths are kept
// verbatim; resolve_run_config_paths applies the directory conventions.
RunConfig parse_run_config(std::string_view text);

// Relative input paths are resolved against the directory holding the config
// file; relative output paths against out_dir when it is nonempty.
void resolve_run_config_paths(RunConfig& config,
                              const std::filesystem::path& config_dir,
                              const std::filesystem::path& out_dir);

// Reads, parses, and resolves in one step. The default output directory comes
// from the WARDWALK_OUT_DIR environment variable when it is set.
RunConfig load_run_config(const std::filesystem::path& config_path);

}  // namespace wardwalk
