#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wardwalk {

// One ward (precinct) of the dual multigraph. Attributes are real-valued
// because the ingestion pipeline allocates them proportionally to area.
struct WardNode {
  int id = 0;
  double population = 0.0;
  double rep_votes = 0.0;
  double dem_votes = 0.0;
  double area = 0.0;
  double outer_boundary = 0.0;
  std::string county;
  int initial_district = 0;
  bool frozen = false;
};

// Aggregated adjacency between two wards: parallel boundary segments are
// pre-summed into a single shared_length per unordered pair.
struct EdgeRecord {
  int u = 0;
  int v = 0;
  double shared_length = 0.0;
};

struct Neighbor {
  int ward = 0;
  double shared_length = 0.0;
};

// Immutable ward map: nodes, aggregated adjacency, county structure and the
// frozen-district markup derived from the initial districting. Safe to share
// across threads once constructed.
class DualGraph {
 public:
  DualGraph(std::vector<WardNode> nodes, std::vector<EdgeRecord> edges,
            int num_districts);

  int num_wards() const { return static_cast<int>(nodes_.size()); }
  int num_districts() const { return num_districts_; }
  const WardNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<WardNode>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  std::span<const Neighbor> neighbors(int ward) const {
    const auto begin = adj_offsets_[static_cast<std::size_t>(ward)];
    const auto end = adj_offsets_[static_cast<std::size_t>(ward) + 1];
    return {adj_.data() + begin, adj_.data() + end};
  }
  int degree(int ward) const {
    return static_cast<int>(adj_offsets_[static_cast<std::size_t>(ward) + 1] -
                            adj_offsets_[static_cast<std::size_t>(ward)]);
  }

  const std::map<std::string, std::vector<int>>& county_groups() const {
    return county_groups_;
  }
  const std::set<std::string>& intact_counties() const { return intact_counties_; }

  // True iff the ward's county is intact in the seed districting and has at
  // least two wards, i.e. moving this ward would break the county apart.
  bool in_multiward_intact_county(int ward) const {
    return multiward_intact_[static_cast<std::size_t>(ward)];
  }

  // True iff the district contains a frozen ward in the seed districting.
  bool district_frozen(int district) const {
    return district_frozen_[static_cast<std::size_t>(district)];
  }
  bool any_frozen() const { return any_frozen_; }

  double total_population() const { return total_population_; }
  // Target population per district, P-bar in the population property.
  double ideal_district_population() const {
    return total_population_ / num_districts_;
  }
  // Average ward population, the unit in which the tolerance is expressed.
  double average_ward_population() const {
    return total_population_ / static_cast<double>(nodes_.size());
  }

  // Stable fingerprint of nodes, edges and district count, used to guard
  // cross-run report comparisons.
  const std::string& content_hash() const { return content_hash_; }

 private:
  std::vector<WardNode> nodes_;
  std::vector<EdgeRecord> edges_;
  int num_districts_ = 0;
  std::vector<std::size_t> adj_offsets_;
  std::vector<Neighbor> adj_;
  std::map<std::string, std::vector<int>> county_groups_;
  std::set<std::string> intact_counties_;
  std::vector<bool> multiward_intact_;
  std::vector<bool> district_frozen_;
  bool any_frozen_ = false;
  double total_population_ = 0.0;
  std::string content_hash_;
};

// Parse the canonical tabular representation. Nodes header:
// id,pop,rep,dem,area,outer_boundary,county,district,frozen
// Edges header: u,v,shared_length
DualGraph parse_graph(std::string_view nodes_csv, std::string_view edges_csv,
                      int num_districts);
DualGraph load_graph(const std::string& nodes_path, const std::string& edges_path,
                     int num_districts);

std::string write_nodes_csv(std::span<const WardNode> nodes);
std::string write_edges_csv(std::span<const EdgeRecord> edges);
std::string write_nodes_csv(const DualGraph& graph);
std::string write_edges_csv(const DualGraph& graph);
void save_graph(const DualGraph& graph, const std::string& nodes_path,
                const std::string& edges_path);

}  // namespace wardwalk
