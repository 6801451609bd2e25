#include "wardwalk/constraints.hpp"

#include <cmath>
#include <cstdint>

#include "wardwalk/error.hpp"

namespace wardwalk {

std::string to_string(CompactnessMode mode) {
  switch (mode) {
    case CompactnessMode::kPerimeter:
      return "perimeter";
    case CompactnessMode::kL1:
      return "l1";
    case CompactnessMode::kL2:
      return "l2";
  }
  throw Error("unknown compactness mode");
}

CompactnessMode compactness_mode_from_string(const std::string& text) {
  if (text == "perimeter") return CompactnessMode::kPerimeter;
  if (text == "l1") return CompactnessMode::kL1;
  if (text == "l2") return CompactnessMode::kL2;
  throw ConfigError("unknown compactness mode '" + text +
                    "' (expected perimeter, l1 or l2)");
}

namespace {

double district_term(double perimeter, double area, CompactnessMode mode) {
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

// Reusable per-thread BFS workspace; stamps avoid clearing the visited array
// between calls.
struct BfsScratch {
  std::vector<std::uint64_t> stamp;
  std::vector<int> queue;
  std::uint64_t epoch = 0;
};
thread_local BfsScratch bfs_scratch;

// Walks the members of `district`, excluding `skip_ward` (pass -1 to keep
// all), starting from `start`. Returns the number of members reached.
int count_reachable(const Plan& plan, int district, int start, int skip_ward) {
  const DualGraph& graph = plan.graph();
  const auto n = static_cast<std::size_t>(graph.num_wards());
  BfsScratch& s = bfs_scratch;
  if (s.stamp.size() < n) s.stamp.assign(n, 0);
  const std::uint64_t mark = ++s.epoch;
  s.queue.clear();
  if (skip_ward >= 0) s.stamp[static_cast<std::size_t>(skip_ward)] = mark;
  s.stamp[static_cast<std::size_t>(start)] = mark;
  s.queue.push_back(start);
  int reached = 1;
  std::size_t head = 0;
  while (head < s.queue.size()) {
    const int x = s.queue[head++];
    for (const Neighbor& nb : graph.neighbors(x)) {
      if (s.stamp[static_cast<std::size_t>(nb.ward)] == mark) continue;
      if (plan.district_of(nb.ward) != district) continue;
      s.stamp[static_cast<std::size_t>(nb.ward)] = mark;
      s.queue.push_back(nb.ward);
      ++reached;
    }
  }
  return reached;
}

bool district_connected(const Plan& plan, int district) {
  int start = -1;
  for (int w = 0; w < plan.graph().num_wards(); ++w) {
    if (plan.district_of(w) == district) {
      start = w;
      break;
    }
  }
  if (start < 0) return false;
  return count_reachable(plan, district, start, -1) == plan.size(district);
}

}  // namespace

double compactness_score(const Plan& plan, CompactnessMode mode) {
  double score = 0.0;
  for (int d = 0; d < plan.num_districts(); ++d) {
    score += district_term(plan.perimeter(d), plan.area(d), mode);
  }
  return score;
}

bool check_population(const Plan& plan, const ValidityConfig& cfg, Flip flip) {
  const DualGraph& graph = plan.graph();
  const WardNode& node = graph.node(flip.ward);
  const int from = plan.district_of(flip.ward);
  // Same expressions as Plan::flip_effect, so the predicted populations agree
  // bitwise with the post-flip caches.
  const double pop_from = plan.population(from) - node.population;
  const double pop_to = plan.population(flip.to_district) + node.population;
  const double ideal = graph.ideal_district_population();
  const double bound = cfg.pop_tolerance_wards * graph.average_ward_population();
  return std::abs(pop_from - ideal) < bound && std::abs(pop_to - ideal) < bound;
}

bool check_contiguity(const Plan& plan, Flip flip) {
  if (!plan.on_boundary(flip.ward, flip.to_district)) return false;
  const int from = plan.district_of(flip.ward);
  if (plan.size(from) == 1) return true;
  int start = -1;
  for (const Neighbor& nb : plan.graph().neighbors(flip.ward)) {
    if (plan.district_of(nb.ward) == from) {
      start = nb.ward;
      break;
    }
  }
  if (start < 0) return false;
  return count_reachable(plan, from, start, flip.ward) == plan.size(from) - 1;
}

bool check_compactness(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Flip flip) {
  const FlipEffect fx = plan.flip_effect(flip.ward, flip.to_district);
  double score = 0.0;
  for (int d = 0; d < plan.num_districts(); ++d) {
    if (d == fx.from_district) {
      score += district_term(fx.from_perimeter, fx.from_area, cfg.compactness_mode);
    } else if (d == fx.to_district) {
      score += district_term(fx.to_perimeter, fx.to_area, cfg.compactness_mode);
    } else {
      score += district_term(plan.perimeter(d), plan.area(d), cfg.compactness_mode);
    }
  }
  return score <= cfg.compactness_budget * seed_score;
}

bool check_county_and_frozen(const DualGraph& graph, const ValidityConfig& cfg,
                             Flip flip) {
  if (cfg.enforce_mm &&
      (graph.node(flip.ward).frozen || graph.district_frozen(flip.to_district))) {
    return false;
  }
  if (cfg.enforce_counties && graph.in_multiward_intact_county(flip.ward)) {
    return false;
  }
  return true;
}

bool is_valid_flip(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                   Flip flip) {
  const DualGraph& graph = plan.graph();
  if (flip.ward < 0 || flip.ward >= graph.num_wards()) return false;
  if (flip.to_district < 0 || flip.to_district >= plan.num_districts()) return false;
  const int from = plan.district_of(flip.ward);
  if (from == flip.to_district) return false;
  if (plan.size(from) == 1) return false;
  if (!check_county_and_frozen(graph, cfg, flip)) return false;
  if (!plan.on_boundary(flip.ward, flip.to_district)) return false;
  if (!check_population(plan, cfg, flip)) return false;
  if (!check_compactness(plan, cfg, seed_score, flip)) return false;
  return check_contiguity(plan, flip);
}

void require_seed_valid(const Plan& plan, const ValidityConfig& cfg) {
  if (cfg.pop_tolerance_wards <= 0.0) {
    throw ConfigError("pop_tolerance_wards must be > 0");
  }
  if (cfg.compactness_budget <= 0.0) {
    throw ConfigError("compactness_budget must be > 0");
  }
  const DualGraph& graph = plan.graph();
  for (int d = 0; d < plan.num_districts(); ++d) {
    if (!district_connected(plan, d)) {
      throw SeedError("seed plan: district " + std::to_string(d) + " is disconnected");
    }
  }
  const double ideal = graph.ideal_district_population();
  const double bound = cfg.pop_tolerance_wards * graph.average_ward_population();
  for (int d = 0; d < plan.num_districts(); ++d) {
    const double deviation = std::abs(plan.population(d) - ideal);
    if (!(deviation < bound)) {
      throw SeedError("seed plan: district " + std::to_string(d) +
                      " population deviates by " + std::to_string(deviation) +
                      ", tolerance is " + std::to_string(bound));
    }
  }
  const double score = compactness_score(plan, cfg.compactness_mode);
  if (!(score <= cfg.compactness_budget * score)) {
    throw SeedError("seed plan: compactness budget factor below 1 rejects the seed itself");
  }
  if (cfg.enforce_counties) {
    for (const std::string& county : graph.intact_counties()) {
      const auto& wards = graph.county_groups().at(county);
      const int d = plan.district_of(wards.front());
      for (int w : wards) {
        if (plan.district_of(w) != d) {
          throw SeedError("seed plan: intact county '" + county + "' is split");
        }
      }
    }
  }
  if (cfg.enforce_mm) {
    for (const WardNode& node : graph.nodes()) {
      if (node.frozen && plan.district_of(node.id) != node.initial_district) {
        throw SeedError("seed plan: frozen ward " + std::to_string(node.id) +
                        " is outside its home district");
      }
      const int d = plan.district_of(node.id);
      if (graph.district_frozen(d) && node.initial_district != d) {
        throw SeedError("seed plan: ward " + std::to_string(node.id) +
                        " joined frozen district " + std::to_string(d));
      }
    }
  }
}

}  // namespace wardwalk
