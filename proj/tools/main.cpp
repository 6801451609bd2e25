#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "wardwalk/chain.hpp"
#include "wardwalk/config.hpp"
#include "wardwalk/error.hpp"
#include "wardwalk/graph.hpp"
#include "wardwalk/gridkit.hpp"
#include "wardwalk/ingest.hpp"
#include "wardwalk/io.hpp"
#include "wardwalk/outlier.hpp"
#include "wardwalk/plan.hpp"
#include "wardwalk/render.hpp"

namespace fs = std::filesystem;
using namespace wardwalk;

namespace {

fs::path default_out_dir() {
  const char* env = std::getenv("WARDWALK_OUT_DIR");
  return env ? fs::path(env) : fs::path();
}

std::string resolve_output(const std::string& path, const fs::path& dir) {
  const fs::path p(path);
  if (p.is_absolute() || dir.empty()) return path;
  return (dir / p).lexically_normal().string();
}

std::string report_row(const EpsilonReport& report) {
  std::string row = report.mode;
  row += "  ";
  row += report.enforce_counties ? "yes" : "no";
  row += "  ";
  row += report.enforce_mm ? "yes" : "no";
  row += "  ";
  row += format_double(report.epsilon);
  row += "  ";
  row += render_p_4dp(report.p_value);
  return row;
}

DualGraph build_graph(const RunConfig& cfg) {
  if (cfg.use_synthetic) return make_grid(cfg.synthetic);
  return load_graph(cfg.graph.nodes_path, cfg.graph.edges_path,
                    cfg.graph.num_districts);
}

std::vector<double> trace_labels(const std::string& text) {
  std::vector<double> labels;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != "step,accepted,ward,to_district,label") {
        throw Error("trace file has an unexpected header");
      }
      header = false;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 5) throw Error("malformed trace line");
    labels.push_back(parse_double(fields[4], "trace label"));
  }
  if (labels.empty()) throw Error("trace file has no steps");
  return labels;
}

int cmd_grid(const std::string& config_path, std::string nodes_out,
             std::string edges_out) {
  const RunConfig cfg = load_run_config(config_path);
  if (!cfg.use_synthetic) {
    throw ConfigError("grid needs a config with an input.synthetic stanza");
  }
  const DualGraph graph = make_grid(cfg.synthetic);
  const fs::path out_dir = default_out_dir();
  nodes_out = resolve_output(nodes_out, out_dir);
  edges_out = resolve_output(edges_out, out_dir);
  write_text_file(nodes_out, write_nodes_csv(graph));
  write_text_file(edges_out, write_edges_csv(graph));
  std::cerr << "wrote " << nodes_out << " and " << edges_out << "\n";
  return 0;
}

int cmd_ingest(const std::string& geometry_path, const std::string& out_dir_arg) {
  const fs::path out_dir =
      out_dir_arg.empty() ? default_out_dir() : fs::path(out_dir_arg);
  const IngestResult result = run_ingest_pipeline(read_text_file(geometry_path));
  const IngestReport& report = result.report;

  const std::string nodes_path = resolve_output("nodes.csv", out_dir);
  const std::string edges_path = resolve_output("edges.csv", out_dir);
  const std::string report_path = resolve_output("ingest_report.json", out_dir);
  write_text_file(nodes_path, write_nodes_csv(result.nodes));
  write_text_file(edges_path, write_edges_csv(result.edges));
  write_text_file(report_path, ingest_report_to_json(report));
  std::cerr << "wrote " << nodes_path << ", " << edges_path << " and "
            << report_path << "\n";

  std::cout << "precincts: " << report.initial_count << " -> "
            << report.after_merge << " after island merge -> "
            << report.after_split << " after multipolygon split -> "
            << report.after_dissolve << " after containment dissolve\n";
  std::cout << "district population, votes and efficiency gap "
            << (report.conserved ? "conserved" : "NOT conserved") << "\n";
  if (!report.conserved) {
    std::cerr << "error: the pipeline changed district attributes\n";
    return 1;
  }
  return 0;
}

int cmd_run(const std::string& config_path, bool seed_given, std::uint64_t seed) {
  RunConfig cfg = load_run_config(config_path);
  if (seed_given) cfg.chain.rng_seed = seed;

  const DualGraph graph = build_graph(cfg);
  Plan plan(graph);
  require_seed_valid(plan, cfg.validity);

  std::ofstream trace;
  if (!cfg.trace_path.empty()) {
    trace.open(cfg.trace_path);
    if (!trace) throw IoError("cannot open trace file '" + cfg.trace_path + "'");
  }
  std::vector<double> reservoir;
  const EpsilonReport report =
      run_trajectory(plan, cfg.validity, cfg.chain,
                     trace.is_open() ? &trace : nullptr, &reservoir);
  if (trace.is_open()) {
    trace.close();
    if (!trace) throw IoError("cannot finish trace file '" + cfg.trace_path + "'");
  }

  write_text_file(cfg.report_path, report_to_json(report));
  if (!cfg.histogram_csv_path.empty() || !cfg.histogram_svg_path.empty()) {
    const Histogram h =
        build_histogram(reservoir, report.seed_label, cfg.histogram_bins);
    if (!cfg.histogram_csv_path.empty()) {
      write_text_file(cfg.histogram_csv_path, histogram_to_csv(h));
    }
    if (!cfg.histogram_svg_path.empty()) {
      write_text_file(cfg.histogram_svg_path, histogram_to_svg(h));
    }
  }

  std::cout << report_row(report) << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& report_paths,
               const std::string& trace_path, const std::string& svg_path,
               int bins) {
  std::vector<EpsilonReport> reports;
  reports.reserve(report_paths.size());
  for (const std::string& path : report_paths) {
    reports.push_back(report_from_json(read_text_file(path)));
  }
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].graph_hash != reports[0].graph_hash) {
      std::cerr << "warning: reports mix different instances (graph hash "
                << reports[i].graph_hash << " vs " << reports[0].graph_hash
                << ")\n";
      break;
    }
  }
  std::cout << render_report_table(reports);

  if (!svg_path.empty()) {
    if (trace_path.empty()) {
      throw ConfigError("--svg needs --trace as the label source");
    }
    const std::vector<double> labels = trace_labels(read_text_file(trace_path));
    const Histogram h = build_histogram(labels, reports[0].seed_label, bins);
    write_text_file(resolve_output(svg_path, default_out_dir()),
                    histogram_to_svg(h));
  }
  return 0;
}

template <typename F>
int guarded(F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SeedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-ward-flip districting chains: ingest, run, report"};
  app.require_subcommand(1);

  std::string grid_config;
  std::string grid_nodes = "nodes.csv";
  std::string grid_edges = "edges.csv";
  auto* grid = app.add_subcommand("grid", "Emit a synthetic instance's graph tables");
  grid->add_option("config", grid_config, "Run config with an input.synthetic stanza")
      ->required();
  grid->add_option("--nodes", grid_nodes, "Nodes table output path");
  grid->add_option("--edges", grid_edges, "Edges table output path");

  std::string geometry_path;
  std::string ingest_out;
  auto* ingest =
      app.add_subcommand("ingest", "Run the geometry pipeline and emit graph tables");
  ingest->add_option("geometry", geometry_path, "Precinct geometry JSON")->required();
  ingest->add_option("--out-dir", ingest_out,
                     "Output directory (default $WARDWALK_OUT_DIR or .)");

  std::string run_config;
  std::uint64_t seed_value = 0;
  auto* run = app.add_subcommand("run", "Run one chain trajectory from a config file");
  run->add_option("config", run_config, "Run configuration JSON")->required();
  auto* seed_opt = run->add_option("--seed", seed_value, "Override chain.rng_seed");

  std::vector<std::string> report_paths;
  std::string trace_path;
  std::string svg_path;
  int bins = 40;
  auto* report =
      app.add_subcommand("report", "Render one or more reports as an aligned table");
  report->add_option("reports", report_paths, "Report JSON files")->required();
  report->add_option("--trace", trace_path,
                     "Trace CSV supplying the labels for the histogram");
  report->add_option("--svg", svg_path, "Write an SVG label histogram here");
  report->add_option("--bins", bins, "Histogram bin count")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return guarded([&]() -> int {
    if (grid->parsed()) return cmd_grid(grid_config, grid_nodes, grid_edges);
    if (ingest->parsed()) return cmd_ingest(geometry_path, ingest_out);
    if (run->parsed()) return cmd_run(run_config, seed_opt->count() > 0, seed_value);
    return cmd_report(report_paths, trace_path, svg_path, bins);
  });
}
