#include "wardwalk/gridkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wardwalk/error.hpp"

namespace wardwalk {

namespace {

template <typename T>
void check_override(const std::vector<T>& values, std::size_t cells, const char* name) {
  if (!values.empty() && values.size() != cells) {
    throw ConfigError(std::string(name) + " override must have one entry per cell");
  }
}

}  // namespace

DualGraph make_grid(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw ConfigError("grid dimensions must be positive");
  }
  if (spec.num_districts < 1) {
    throw ConfigError("num_districts must be >= 1");
  }
  const int cells = spec.rows * spec.cols;
  if (cells < spec.num_districts) {
    throw ConfigError("infeasible banding: " + std::to_string(spec.num_districts) +
                      " districts need at least as many cells, grid has " +
                      std::to_string(cells));
  }
  const auto cell_count = static_cast<std::size_t>(cells);
  check_override(spec.cell_population, cell_count, "cell_population");
  check_override(spec.cell_rep, cell_count, "cell_rep");
  check_override(spec.cell_dem, cell_count, "cell_dem");
  check_override(spec.cell_county, cell_count, "cell_county");
  if (!spec.seed_assignment.empty() && spec.seed_assignment.size() != cell_count) {
    throw ConfigError("seed_assignment must have one entry per cell");
  }

  std::vector<int> seed(cell_count, 0);
  if (!spec.seed_assignment.empty()) {
    seed = spec.seed_assignment;
  } else {
    // Serpentine column order makes every contiguous band of cells a path,
    // hence connected; the first (cells % districts) bands take the extra cell.
    const int base = cells / spec.num_districts;
    const int extra = cells % spec.num_districts;
    int position = 0;
    for (int c = 0; c < spec.cols; ++c) {
      for (int i = 0; i < spec.rows; ++i) {
        const int r = (c % 2 == 0) ? i : spec.rows - 1 - i;
        const int id = r * spec.cols + c;
        int band = 0;
        int consumed = 0;
        for (; band < spec.num_districts; ++band) {
          consumed += base + (band < extra ? 1 : 0);
          if (position < consumed) break;
        }
        seed[static_cast<std::size_t>(id)] = band;
        ++position;
      }
    }
  }

  std::vector<WardNode> nodes(cell_count);
  std::vector<int> frozen_flags(static_cast<std::size_t>(spec.num_districts), 0);
  for (int d : spec.frozen_districts) {
    if (d < 0 || d >= spec.num_districts) {
      throw ConfigError("frozen district " + std::to_string(d) + " out of range");
    }
    frozen_flags[static_cast<std::size_t>(d)] = 1;
  }
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int id = r * spec.cols + c;
      const auto i = static_cast<std::size_t>(id);
      WardNode& n = nodes[i];
      n.id = id;
      n.population =
          spec.cell_population.empty() ? spec.uniform_population : spec.cell_population[i];
      n.rep_votes = spec.cell_rep.empty() ? spec.vote_unit * (c + 1) : spec.cell_rep[i];
      n.dem_votes =
          spec.cell_dem.empty() ? spec.vote_unit * (spec.cols - c) : spec.cell_dem[i];
      n.area = 1.0;
      n.outer_boundary = static_cast<double>((r == 0) + (r == spec.rows - 1) +
                                             (c == 0) + (c == spec.cols - 1));
      n.county = spec.cell_county.empty() ? "c" + std::to_string(id) : spec.cell_county[i];
      n.initial_district = seed[i];
      n.frozen = frozen_flags[static_cast<std::size_t>(seed[i])] != 0;
    }
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(static_cast<std::size_t>(2 * spec.rows * spec.cols));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int id = r * spec.cols + c;
      if (c + 1 < spec.cols) edges.push_back({id, id + 1, 1.0});
      if (r + 1 < spec.rows) edges.push_back({id, id + spec.cols, 1.0});
    }
  }

  return DualGraph(std::move(nodes), std::move(edges), spec.num_districts);
}

DistrictStatsOracle oracle_district_stats(const DualGraph& graph,
                                          const std::vector<int>& assignment) {
  const auto d_count = static_cast<std::size_t>(graph.num_districts());
  DistrictStatsOracle stats;
  stats.population.assign(d_count, 0.0);
  stats.rep_votes.assign(d_count, 0.0);
  stats.dem_votes.assign(d_count, 0.0);
  stats.area.assign(d_count, 0.0);
  stats.perimeter.assign(d_count, 0.0);
  stats.size.assign(d_count, 0);
  for (int w = 0; w < graph.num_wards(); ++w) {
    const WardNode& node = graph.node(w);
    const auto d = static_cast<std::size_t>(assignment[static_cast<std::size_t>(w)]);
    stats.population[d] += node.population;
    stats.rep_votes[d] += node.rep_votes;
    stats.dem_votes[d] += node.dem_votes;
    stats.area[d] += node.area;
    stats.perimeter[d] += node.outer_boundary;
    ++stats.size[d];
  }
  for (const EdgeRecord& e : graph.edges()) {
    const int du = assignment[static_cast<std::size_t>(e.u)];
    const int dv = assignment[static_cast<std::size_t>(e.v)];
    if (du != dv) {
      stats.perimeter[static_cast<std::size_t>(du)] += e.shared_length;
      stats.perimeter[static_cast<std::size_t>(dv)] += e.shared_length;
    }
  }
  return stats;
}

std::vector<std::pair<int, int>> oracle_boundary_pairs(const DualGraph& graph,
                                                       const std::vector<int>& assignment) {
  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w < graph.num_wards(); ++w) {
    const int dw = assignment[static_cast<std::size_t>(w)];
    std::vector<int> foreign;
    for (const Neighbor& nb : graph.neighbors(w)) {
      const int dx = assignment[static_cast<std::size_t>(nb.ward)];
      if (dx != dw) foreign.push_back(dx);
    }
    std::sort(foreign.begin(), foreign.end());
    foreign.erase(std::unique(foreign.begin(), foreign.end()), foreign.end());
    for (int d : foreign) pairs.emplace_back(w, d);
  }
  return pairs;
}

namespace {

bool oracle_district_connected(const DualGraph& graph, const std::vector<int>& assignment,
                               int district) {
  const int n = graph.num_wards();
  int start = -1;
  int members = 0;
  for (int w = 0; w < n; ++w) {
    if (assignment[static_cast<std::size_t>(w)] == district) {
      if (start < 0) start = w;
      ++members;
    }
  }
  if (members == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int w = stack.back();
    stack.pop_back();
    ++reached;
    for (const Neighbor& nb : graph.neighbors(w)) {
      if (!seen[static_cast<std::size_t>(nb.ward)] &&
          assignment[static_cast<std::size_t>(nb.ward)] == district) {
        seen[static_cast<std::size_t>(nb.ward)] = 1;
        stack.push_back(nb.ward);
      }
    }
  }
  return reached == members;
}

double ratio_term(double perimeter, double area, CompactnessMode mode) {
  switch (mode) {
    case CompactnessMode::kPerimeter:
      return perimeter;
    case CompactnessMode::kL1:
      return perimeter * perimeter / area;
    case CompactnessMode::kL2: {
      const double ratio = perimeter * perimeter / area;
      return ratio * ratio;
    }
  }
  throw Error("unknown compactness mode");
}

double oracle_score(const DualGraph& graph, const DistrictStatsOracle& stats,
                    CompactnessMode mode) {
  double score = 0.0;
  for (int d = 0; d < graph.num_districts(); ++d) {
    const auto i = static_cast<std::size_t>(d);
    score += ratio_term(stats.perimeter[i], stats.area[i], mode);
  }
  return score;
}

}  // namespace

bool oracle_assignment_valid(const DualGraph& graph, const ValidityConfig& cfg,
                             double seed_score, const std::vector<int>& assignment) {
  const int n = graph.num_wards();
  const int d_count = graph.num_districts();
  if (static_cast<int>(assignment.size()) != n) return false;
  for (int w = 0; w < n; ++w) {
    const int d = assignment[static_cast<std::size_t>(w)];
    if (d < 0 || d >= d_count) return false;
  }
  const DistrictStatsOracle stats = oracle_district_stats(graph, assignment);
  for (int d = 0; d < d_count; ++d) {
    if (stats.size[static_cast<std::size_t>(d)] == 0) return false;
    if (!oracle_district_connected(graph, assignment, d)) return false;
  }
  const double ideal = graph.ideal_district_population();
  const double bound = cfg.pop_tolerance_wards * graph.average_ward_population();
  for (int d = 0; d < d_count; ++d) {
    if (!(std::abs(stats.population[static_cast<std::size_t>(d)] - ideal) < bound)) {
      return false;
    }
  }
  if (!(oracle_score(graph, stats, cfg.compactness_mode) <=
        cfg.compactness_budget * seed_score)) {
    return false;
  }
  if (cfg.enforce_counties) {
    for (const std::string& county : graph.intact_counties()) {
      const auto& wards = graph.county_groups().at(county);
      const int d = assignment[static_cast<std::size_t>(wards.front())];
      for (int w : wards) {
        if (assignment[static_cast<std::size_t>(w)] != d) return false;
      }
    }
  }
  if (cfg.enforce_mm) {
    for (const WardNode& node : graph.nodes()) {
      if (node.frozen &&
          assignment[static_cast<std::size_t>(node.id)] != node.initial_district) {
        return false;
      }
      const int d = assignment[static_cast<std::size_t>(node.id)];
      if (graph.district_frozen(d) && node.initial_district != d) return false;
    }
  }
  return true;
}

bool oracle_valid_flip(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Flip flip) {
  const DualGraph& graph = plan.graph();
  if (flip.ward < 0 || flip.ward >= graph.num_wards()) return false;
  if (flip.to_district < 0 || flip.to_district >= plan.num_districts()) return false;
  const int from = plan.district_of(flip.ward);
  if (from == flip.to_district) return false;
  if (plan.size(from) == 1) return false;
  std::vector<int> assignment = plan.assignment();
  assignment[static_cast<std::size_t>(flip.ward)] = flip.to_district;
  return oracle_assignment_valid(graph, cfg, seed_score, assignment);
}

namespace {

// Exhaustive connected-partition search. Parts are grown one at a time from
// the smallest unassigned ward. A part set is visited exactly once: after
// each insertion the part may be closed, and otherwise the smallest eligible
// frontier ward is either included or permanently excluded from this part.
// With property 5 enforced, frozen districts are pre-seeded as closed parts
// so the pinning prunes the search instead of filtering afterwards.
class PlanEnumerator {
 public:
  PlanEnumerator(const DualGraph& graph, const ValidityConfig& cfg, double seed_score,
                 std::size_t max_explored)
      : graph_(graph),
        cfg_(cfg),
        seed_score_(seed_score),
        max_explored_(max_explored),
        n_(graph.num_wards()),
        d_count_(graph.num_districts()),
        ideal_(graph.ideal_district_population()),
        bound_(cfg.pop_tolerance_wards * graph.average_ward_population()),
        part_of_(static_cast<std::size_t>(n_), -1),
        excluded_by_(static_cast<std::size_t>(n_), -1),
        part_pop_(static_cast<std::size_t>(d_count_), 0.0),
        part_pinned_district_(static_cast<std::size_t>(d_count_), -1),
        part_members_(static_cast<std::size_t>(d_count_)) {}

  std::vector<std::vector<int>> run() {
    if (cfg_.enforce_mm && graph_.any_frozen()) {
      if (!preassign_frozen_parts()) return {};
    }
    start_part();
    std::sort(results_.begin(), results_.end());
    return std::move(results_);
  }

 private:
  bool preassign_frozen_parts() {
    for (int d = 0; d < d_count_; ++d) {
      if (!graph_.district_frozen(d)) continue;
      const int k = closed_parts_;
      part_pinned_district_[static_cast<std::size_t>(k)] = d;
      for (const WardNode& node : graph_.nodes()) {
        if (node.initial_district == d) {
          part_of_[static_cast<std::size_t>(node.id)] = k;
          part_members_[static_cast<std::size_t>(k)].push_back(node.id);
          part_pop_[static_cast<std::size_t>(k)] += node.population;
          ++assigned_;
        }
      }
      if (!(std::abs(part_pop_[static_cast<std::size_t>(k)] - ideal_) < bound_)) {
        return false;
      }
      ++closed_parts_;
    }
    return true;
  }

  void bump_explored() {
    if (++explored_ > max_explored_) {
      throw Error("plan enumeration exceeded the guard of " +
                  std::to_string(max_explored_) + " search nodes");
    }
  }

  void start_part() {
    bump_explored();
    if (closed_parts_ == d_count_) {
      if (assigned_ == n_) emit();
      return;
    }
    if (assigned_ == n_) return;
    if (!remainder_coverable()) return;
    int anchor = -1;
    for (int w = 0; w < n_; ++w) {
      if (part_of_[static_cast<std::size_t>(w)] < 0) {
        anchor = w;
        break;
      }
    }
    const int k = closed_parts_;
    include_ward(k, anchor);
    explore_part(k);
    remove_ward(k, anchor);
  }

  // Called exactly once for each distinct content of part k.
  void explore_part(int k) {
    bump_explored();
    if (part_closable(k)) {
      ++closed_parts_;
      start_part();
      --closed_parts_;
    }
    branch_growth(k);
  }

  // Include-or-exclude decision chain over the part's frontier, smallest
  // ward first. Only the include branch re-enters explore_part, so no part
  // content is visited twice.
  void branch_growth(int k) {
    bump_explored();
    const int v = smallest_frontier_ward(k);
    if (v < 0) return;
    // Populations are nonnegative, so a part already at or above the upper
    // band edge can never come back into the band by growing.
    if (part_pop_[static_cast<std::size_t>(k)] < ideal_ + bound_) {
      const double saved_pop = part_pop_[static_cast<std::size_t>(k)];
      include_ward(k, v);
      explore_part(k);
      remove_ward(k, v);
      part_pop_[static_cast<std::size_t>(k)] = saved_pop;
    }
    const int prior = excluded_by_[static_cast<std::size_t>(v)];
    excluded_by_[static_cast<std::size_t>(v)] = k;
    branch_growth(k);
    excluded_by_[static_cast<std::size_t>(v)] = prior;
  }

  void include_ward(int k, int w) {
    part_of_[static_cast<std::size_t>(w)] = k;
    part_members_[static_cast<std::size_t>(k)].push_back(w);
    part_pop_[static_cast<std::size_t>(k)] += graph_.node(w).population;
    ++assigned_;
  }

  void remove_ward(int k, int w) {
    part_of_[static_cast<std::size_t>(w)] = -1;
    part_members_[static_cast<std::size_t>(k)].pop_back();
    part_pop_[static_cast<std::size_t>(k)] -= graph_.node(w).population;
    --assigned_;
  }

  int smallest_frontier_ward(int k) const {
    int best = -1;
    for (int w : part_members_[static_cast<std::size_t>(k)]) {
      for (const Neighbor& nb : graph_.neighbors(w)) {
        const int x = nb.ward;
        if (part_of_[static_cast<std::size_t>(x)] >= 0) continue;
        if (excluded_by_[static_cast<std::size_t>(x)] == k) continue;
        if (best < 0 || x < best) best = x;
      }
    }
    return best;
  }

  bool part_closable(int k) const {
    if (!(std::abs(part_pop_[static_cast<std::size_t>(k)] - ideal_) < bound_)) {
      return false;
    }
    const auto& members = part_members_[static_cast<std::size_t>(k)];
    if (cfg_.enforce_counties) {
      for (int w : members) {
        if (!graph_.in_multiward_intact_county(w)) continue;
        for (int other : graph_.county_groups().at(graph_.node(w).county)) {
          if (part_of_[static_cast<std::size_t>(other)] != k) return false;
        }
      }
    }
    if (cfg_.enforce_mm) {
      for (int w : members) {
        if (graph_.node(w).frozen) return false;
      }
    }
    return true;
  }

  // Every connected component of the unassigned remainder must be splittable
  // into whole parts within the population band, and the remaining part
  // budget must be able to cover all components at once.
  bool remainder_coverable() {
    const int remaining_parts = d_count_ - closed_parts_;
    component_stamp_.assign(static_cast<std::size_t>(n_), 0);
    int min_parts_total = 0;
    long long max_parts_total = 0;
    for (int w = 0; w < n_; ++w) {
      if (part_of_[static_cast<std::size_t>(w)] >= 0) continue;
      if (component_stamp_[static_cast<std::size_t>(w)] != 0) continue;
      double pop = 0.0;
      component_stamp_[static_cast<std::size_t>(w)] = 1;
      component_queue_.clear();
      component_queue_.push_back(w);
      std::size_t head = 0;
      while (head < component_queue_.size()) {
        const int x = component_queue_[head++];
        pop += graph_.node(x).population;
        for (const Neighbor& nb : graph_.neighbors(x)) {
          if (part_of_[static_cast<std::size_t>(nb.ward)] >= 0) continue;
          if (component_stamp_[static_cast<std::size_t>(nb.ward)] != 0) continue;
          component_stamp_[static_cast<std::size_t>(nb.ward)] = 1;
          component_queue_.push_back(nb.ward);
        }
      }
      // Feasible part counts c for this component form the integer interval
      // with c*(ideal-bound) < pop < c*(ideal+bound).
      int min_c = -1;
      int max_c = 0;
      for (int c = 1; c <= remaining_parts; ++c) {
        if (c * (ideal_ - bound_) < pop && pop < c * (ideal_ + bound_)) {
          if (min_c < 0) min_c = c;
          max_c = c;
        }
      }
      if (min_c < 0) return false;
      min_parts_total += min_c;
      max_parts_total += max_c;
      if (min_parts_total > remaining_parts) return false;
    }
    return min_parts_total <= remaining_parts && remaining_parts <= max_parts_total;
  }

  void emit() {
    // Parts are complete; check the label-independent geometry budget once,
    // then expand every admissible district labeling.
    std::vector<double> part_perimeter(static_cast<std::size_t>(d_count_), 0.0);
    std::vector<double> part_area(static_cast<std::size_t>(d_count_), 0.0);
    for (int w = 0; w < n_; ++w) {
      const auto k = static_cast<std::size_t>(part_of_[static_cast<std::size_t>(w)]);
      part_perimeter[k] += graph_.node(w).outer_boundary;
      part_area[k] += graph_.node(w).area;
    }
    for (const EdgeRecord& e : graph_.edges()) {
      const int ku = part_of_[static_cast<std::size_t>(e.u)];
      const int kv = part_of_[static_cast<std::size_t>(e.v)];
      if (ku != kv) {
        part_perimeter[static_cast<std::size_t>(ku)] += e.shared_length;
        part_perimeter[static_cast<std::size_t>(kv)] += e.shared_length;
      }
    }
    double score = 0.0;
    for (int k = 0; k < d_count_; ++k) {
      const auto i = static_cast<std::size_t>(k);
      score += ratio_term(part_perimeter[i], part_area[i], cfg_.compactness_mode);
    }
    if (!(score <= cfg_.compactness_budget * seed_score_)) return;

    std::vector<int> free_parts;
    std::vector<int> free_districts;
    std::vector<int> label_of_part(static_cast<std::size_t>(d_count_), -1);
    for (int k = 0; k < d_count_; ++k) {
      if (part_pinned_district_[static_cast<std::size_t>(k)] >= 0) {
        label_of_part[static_cast<std::size_t>(k)] =
            part_pinned_district_[static_cast<std::size_t>(k)];
      } else {
        free_parts.push_back(k);
      }
    }
    for (int d = 0; d < d_count_; ++d) {
      if (!(cfg_.enforce_mm && graph_.district_frozen(d))) free_districts.push_back(d);
    }
    do {
      for (std::size_t i = 0; i < free_parts.size(); ++i) {
        label_of_part[static_cast<std::size_t>(free_parts[i])] = free_districts[i];
      }
      std::vector<int> assignment(static_cast<std::size_t>(n_));
      for (int w = 0; w < n_; ++w) {
        assignment[static_cast<std::size_t>(w)] =
            label_of_part[static_cast<std::size_t>(part_of_[static_cast<std::size_t>(w)])];
      }
      results_.push_back(std::move(assignment));
    } while (std::next_permutation(free_districts.begin(), free_districts.end()));
  }

  const DualGraph& graph_;
  const ValidityConfig& cfg_;
  double seed_score_;
  std::size_t max_explored_;
  std::size_t explored_ = 0;
  int n_;
  int d_count_;
  double ideal_;
  double bound_;
  int closed_parts_ = 0;
  int assigned_ = 0;
  std::vector<int> part_of_;
  std::vector<int> excluded_by_;
  std::vector<double> part_pop_;
  std::vector<int> part_pinned_district_;
  std::vector<std::vector<int>> part_members_;
  std::vector<char> component_stamp_;
  std::vector<int> component_queue_;
  std::vector<std::vector<int>> results_;
};

}  // namespace

std::vector<std::vector<int>> enumerate_valid_plans(const DualGraph& graph,
                                                    const ValidityConfig& cfg,
                                                    const Plan& seed_plan,
                                                    std::size_t max_explored) {
  const double seed_score = compactness_score(seed_plan, cfg.compactness_mode);
  PlanEnumerator enumerator(graph, cfg, seed_score, max_explored);
  return enumerator.run();
}

}  // namespace wardwalk
