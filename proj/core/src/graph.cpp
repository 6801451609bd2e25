#include "wardwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <utility>

#include "wardwalk/error.hpp"
#include "wardwalk/io.hpp"

namespace wardwalk {

namespace {

void check_node_attributes(const WardNode& n) {
  const auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(n.population) || !finite_nonneg(n.rep_votes) ||
      !finite_nonneg(n.dem_votes) || !finite_nonneg(n.outer_boundary)) {
    throw Error("ward " + std::to_string(n.id) +
                ": population, votes and outer_boundary must be finite and >= 0");
  }
  if (!std::isfinite(n.area) || n.area <= 0.0) {
    throw Error("ward " + std::to_string(n.id) + ": nonpositive area");
  }
}

// Walks one district's induced subgraph and reports whether it is connected.
bool district_connected(const std::vector<WardNode>& nodes,
                        const std::vector<std::size_t>& offsets,
                        const std::vector<Neighbor>& adj, int district) {
  const int n = static_cast<int>(nodes.size());
  int start = -1;
  int member_count = 0;
  for (int w = 0; w < n; ++w) {
    if (nodes[static_cast<std::size_t>(w)].initial_district == district) {
      if (start < 0) start = w;
      ++member_count;
    }
  }
  if (member_count == 0) return false;

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> queue;
  queue.push_back(start);
  seen[static_cast<std::size_t>(start)] = 1;
  int reached = 0;
  while (!queue.empty()) {
    const int w = queue.back();
    queue.pop_back();
    ++reached;
    const auto begin = offsets[static_cast<std::size_t>(w)];
    const auto end = offsets[static_cast<std::size_t>(w) + 1];
    for (auto i = begin; i != end; ++i) {
      const int x = adj[i].ward;
      if (!seen[static_cast<std::size_t>(x)] &&
          nodes[static_cast<std::size_t>(x)].initial_district == district) {
        seen[static_cast<std::size_t>(x)] = 1;
        queue.push_back(x);
      }
    }
  }
  return reached == member_count;
}

}  // namespace

DualGraph::DualGraph(std::vector<WardNode> nodes, std::vector<EdgeRecord> edges,
                     int num_districts)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), num_districts_(num_districts) {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw Error("graph has no wards");
  if (num_districts_ < 1) throw Error("num_districts must be >= 1");

  for (int i = 0; i < n; ++i) {
    const WardNode& node = nodes_[static_cast<std::size_t>(i)];
    if (node.id != i) {
      throw Error("ward ids must be dense 0..n-1; position " + std::to_string(i) +
                  " holds id " + std::to_string(node.id));
    }
    check_node_attributes(node);
    if (node.initial_district < 0 || node.initial_district >= num_districts_) {
      throw Error("ward " + std::to_string(i) + ": district " +
                  std::to_string(node.initial_district) + " out of range 0.." +
                  std::to_string(num_districts_ - 1));
    }
  }

  std::vector<char> district_seen(static_cast<std::size_t>(num_districts_), 0);
  for (const WardNode& node : nodes_) {
    district_seen[static_cast<std::size_t>(node.initial_district)] = 1;
  }
  for (int d = 0; d < num_districts_; ++d) {
    if (!district_seen[static_cast<std::size_t>(d)]) {
      throw Error("district " + std::to_string(d) + " has no wards");
    }
  }

  std::unordered_set<std::uint64_t> seen_pairs;
  seen_pairs.reserve(edges_.size() * 2);
  for (const EdgeRecord& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  "): unknown ward id");
    }
    if (e.u == e.v) {
      throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  "): self-loop");
    }
    if (!std::isfinite(e.shared_length) || e.shared_length <= 0.0) {
      throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  "): shared_length must be finite and > 0");
    }
    const int a = std::min(e.u, e.v);
    const int b = std::max(e.u, e.v);
    const std::uint64_t key =
        static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
        static_cast<std::uint64_t>(b);
    if (!seen_pairs.insert(key).second) {
      throw Error("duplicate edge pair (" + std::to_string(a) + "," +
                  std::to_string(b) + ")");
    }
  }

  // Build CSR adjacency; neighbor lists come out sorted by ward id because
  // edges are counted and filled in two ordered passes.
  adj_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const EdgeRecord& e : edges_) {
    ++adj_offsets_[static_cast<std::size_t>(e.u) + 1];
    ++adj_offsets_[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t i = 1; i < adj_offsets_.size(); ++i) {
    adj_offsets_[i] += adj_offsets_[i - 1];
  }
  adj_.resize(adj_offsets_.back());
  std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  std::vector<EdgeRecord> sorted_edges = edges_;
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  for (const EdgeRecord& e : sorted_edges) {
    adj_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.shared_length};
  }
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) {
              return std::tie(a.v, a.u) < std::tie(b.v, b.u);
            });
  for (const EdgeRecord& e : sorted_edges) {
    adj_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.shared_length};
  }
  for (int w = 0; w < n; ++w) {
    auto begin = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[static_cast<std::size_t>(w)]);
    auto end = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[static_cast<std::size_t>(w) + 1]);
    std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) {
      return a.ward < b.ward;
    });
  }

  for (int d = 0; d < num_districts_; ++d) {
    if (!district_connected(nodes_, adj_offsets_, adj_, d)) {
      throw SeedError("initial district " + std::to_string(d) + " is disconnected");
    }
  }

  for (const WardNode& node : nodes_) {
    county_groups_[node.county].push_back(node.id);
    total_population_ += node.population;
  }
  for (const auto& [county, wards] : county_groups_) {
    const int d = nodes_[static_cast<std::size_t>(wards.front())].initial_district;
    const bool intact = std::all_of(wards.begin(), wards.end(), [&](int w) {
      return nodes_[static_cast<std::size_t>(w)].initial_district == d;
    });
    if (intact) intact_counties_.insert(county);
  }
  multiward_intact_.assign(static_cast<std::size_t>(n), false);
  for (const auto& [county, wards] : county_groups_) {
    if (wards.size() >= 2 && intact_counties_.count(county) != 0) {
      for (int w : wards) multiward_intact_[static_cast<std::size_t>(w)] = true;
    }
  }

  district_frozen_.assign(static_cast<std::size_t>(num_districts_), false);
  for (const WardNode& node : nodes_) {
    if (node.frozen) {
      district_frozen_[static_cast<std::size_t>(node.initial_district)] = true;
      any_frozen_ = true;
    }
  }

  std::uint64_t h = fnv1a(write_nodes_csv(*this));
  h = fnv1a(write_edges_csv(*this), h);
  h = fnv1a(std::to_string(num_districts_), h);
  content_hash_ = to_hex(h);
}

DualGraph parse_graph(std::string_view nodes_csv, std::string_view edges_csv,
                      int num_districts) {
  const auto rows = [](std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        std::string_view line = text.substr(start, i - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = i + 1;
      }
    }
    return lines;
  };

  const auto node_lines = rows(nodes_csv);
  if (node_lines.empty() ||
      node_lines.front() != "id,pop,rep,dem,area,outer_boundary,county,district,frozen") {
    throw Error("nodes table: missing or unexpected header");
  }
  std::vector<WardNode> nodes;
  nodes.reserve(node_lines.size() - 1);
  for (std::size_t i = 1; i < node_lines.size(); ++i) {
    const auto fields = split_fields(node_lines[i]);
    if (fields.size() != 9) {
      throw Error("nodes table line " + std::to_string(i + 1) + ": expected 9 fields, got " +
                  std::to_string(fields.size()));
    }
    const std::string where = " at nodes table line " + std::to_string(i + 1);
    WardNode n;
    n.id = static_cast<int>(parse_int(fields[0], "node id" + where));
    n.population = parse_double(fields[1], "node pop" + where);
    n.rep_votes = parse_double(fields[2], "node rep" + where);
    n.dem_votes = parse_double(fields[3], "node dem" + where);
    n.area = parse_double(fields[4], "node area" + where);
    n.outer_boundary = parse_double(fields[5], "node outer_boundary" + where);
    n.county = std::string(fields[6]);
    n.initial_district = static_cast<int>(parse_int(fields[7], "node district" + where));
    if (fields[8] == "0" || fields[8] == "false") {
      n.frozen = false;
    } else if (fields[8] == "1" || fields[8] == "true") {
      n.frozen = true;
    } else {
      throw Error("nodes table line " + std::to_string(i + 1) + ": frozen must be 0 or 1");
    }
    nodes.push_back(std::move(n));
  }

  const auto edge_lines = rows(edges_csv);
  if (edge_lines.empty() || edge_lines.front() != "u,v,shared_length") {
    throw Error("edges table: missing or unexpected header");
  }
  std::vector<EdgeRecord> edges;
  edges.reserve(edge_lines.size() - 1);
  for (std::size_t i = 1; i < edge_lines.size(); ++i) {
    const auto fields = split_fields(edge_lines[i]);
    if (fields.size() != 3) {
      throw Error("edges table line " + std::to_string(i + 1) + ": expected 3 fields, got " +
                  std::to_string(fields.size()));
    }
    const std::string where = " at edges table line " + std::to_string(i + 1);
    EdgeRecord e;
    e.u = static_cast<int>(parse_int(fields[0], "edge u" + where));
    e.v = static_cast<int>(parse_int(fields[1], "edge v" + where));
    e.shared_length = parse_double(fields[2], "edge shared_length" + where);
    edges.push_back(e);
  }

  return DualGraph(std::move(nodes), std::move(edges), num_districts);
}

DualGraph load_graph(const std::string& nodes_path, const std::string& edges_path,
                     int num_districts) {
  return parse_graph(read_text_file(nodes_path), read_text_file(edges_path),
                     num_districts);
}

std::string write_nodes_csv(std::span<const WardNode> nodes) {
  std::string out = "id,pop,rep,dem,area,outer_boundary,county,district,frozen\n";
  for (const WardNode& n : nodes) {
    out += std::to_string(n.id);
    out += ',';
    out += format_double(n.population);
    out += ',';
    out += format_double(n.rep_votes);
    out += ',';
    out += format_double(n.dem_votes);
    out += ',';
    out += format_double(n.area);
    out += ',';
    out += format_double(n.outer_boundary);
    out += ',';
    out += n.county;
    out += ',';
    out += std::to_string(n.initial_district);
    out += ',';
    out += n.frozen ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string write_edges_csv(std::span<const EdgeRecord> raw_edges) {
  std::vector<EdgeRecord> edges(raw_edges.begin(), raw_edges.end());
  for (EdgeRecord& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::string out = "u,v,shared_length\n";
  for (const EdgeRecord& e : edges) {
    out += std::to_string(e.u);
    out += ',';
    out += std::to_string(e.v);
    out += ',';
    out += format_double(e.shared_length);
    out += '\n';
  }
  return out;
}

std::string write_nodes_csv(const DualGraph& graph) {
  return write_nodes_csv(std::span<const WardNode>(graph.nodes()));
}

std::string write_edges_csv(const DualGraph& graph) {
  return write_edges_csv(std::span<const EdgeRecord>(graph.edges()));
}

void save_graph(const DualGraph& graph, const std::string& nodes_path,
                const std::string& edges_path) {
  write_text_file(nodes_path, write_nodes_csv(graph));
  write_text_file(edges_path, write_edges_csv(graph));
}

}  // namespace wardwalk
