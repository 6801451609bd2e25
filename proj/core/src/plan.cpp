#include "wardwalk/plan.hpp"

#include <algorithm>
#include <string>

#include "wardwalk/error.hpp"

namespace wardwalk {

Plan::Plan(const DualGraph& graph) : Plan(graph, [&] {
  std::vector<int> assignment(static_cast<std::size_t>(graph.num_wards()));
  for (int w = 0; w < graph.num_wards(); ++w) {
    assignment[static_cast<std::size_t>(w)] = graph.node(w).initial_district;
  }
  return assignment;
}()) {}

Plan::Plan(const DualGraph& graph, std::vector<int> assignment)
    : graph_(&graph),
      num_districts_(graph.num_districts()),
      assignment_(std::move(assignment)) {
  const int n = graph.num_wards();
  if (static_cast<int>(assignment_.size()) != n) {
    throw Error("assignment covers " + std::to_string(assignment_.size()) +
                " wards, graph has " + std::to_string(n));
  }
  const auto d_count = static_cast<std::size_t>(num_districts_);
  population_.assign(d_count, 0.0);
  rep_votes_.assign(d_count, 0.0);
  dem_votes_.assign(d_count, 0.0);
  area_.assign(d_count, 0.0);
  perimeter_.assign(d_count, 0.0);
  size_.assign(d_count, 0);

  for (int w = 0; w < n; ++w) {
    const int d = assignment_[static_cast<std::size_t>(w)];
    if (d < 0 || d >= num_districts_) {
      throw Error("assignment of ward " + std::to_string(w) + " references unknown district " +
                  std::to_string(d));
    }
    const WardNode& node = graph.node(w);
    const auto di = static_cast<std::size_t>(d);
    population_[di] += node.population;
    rep_votes_[di] += node.rep_votes;
    dem_votes_[di] += node.dem_votes;
    area_[di] += node.area;
    perimeter_[di] += node.outer_boundary;
    ++size_[di];
  }
  for (int d = 0; d < num_districts_; ++d) {
    if (size_[static_cast<std::size_t>(d)] == 0) {
      throw Error("district " + std::to_string(d) + " is empty");
    }
  }
  for (const EdgeRecord& e : graph.edges()) {
    const int du = assignment_[static_cast<std::size_t>(e.u)];
    const int dv = assignment_[static_cast<std::size_t>(e.v)];
    if (du != dv) {
      perimeter_[static_cast<std::size_t>(du)] += e.shared_length;
      perimeter_[static_cast<std::size_t>(dv)] += e.shared_length;
    }
  }
  set_boundary_from_scratch();
}

void Plan::set_boundary_from_scratch() {
  boundary_counts_.clear();
  const int n = graph_->num_wards();
  for (int w = 0; w < n; ++w) {
    const int dw = assignment_[static_cast<std::size_t>(w)];
    for (const Neighbor& nb : graph_->neighbors(w)) {
      const int dx = assignment_[static_cast<std::size_t>(nb.ward)];
      if (dx != dw) ++boundary_counts_[boundary_key(w, dx)];
    }
  }
}

std::vector<std::pair<int, int>> Plan::boundary_pairs_sorted() const {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(boundary_counts_.size());
  for (const auto& [key, count] : boundary_counts_) {
    const int ward = static_cast<int>(key / static_cast<std::uint64_t>(num_districts_));
    const int district = static_cast<int>(key % static_cast<std::uint64_t>(num_districts_));
    pairs.emplace_back(ward, district);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

FlipEffect Plan::flip_effect(int ward, int to_district) const {
  const int from = district_of(ward);
  const WardNode& node = graph_->node(ward);
  FlipEffect fx;
  fx.ward = ward;
  fx.from_district = from;
  fx.to_district = to_district;
  fx.from_population = population(from) - node.population;
  fx.to_population = population(to_district) + node.population;
  fx.from_rep = rep_votes(from) - node.rep_votes;
  fx.to_rep = rep_votes(to_district) + node.rep_votes;
  fx.from_dem = dem_votes(from) - node.dem_votes;
  fx.to_dem = dem_votes(to_district) + node.dem_votes;
  fx.from_area = area(from) - node.area;
  fx.to_area = area(to_district) + node.area;

  // State-border length moves with the ward; each edge changes the two
  // affected perimeters depending on which side its other endpoint is on.
  double perim_from = perimeter(from) - node.outer_boundary;
  double perim_to = perimeter(to_district) + node.outer_boundary;
  for (const Neighbor& nb : graph_->neighbors(ward)) {
    const int dx = assignment_[static_cast<std::size_t>(nb.ward)];
    if (dx == from) {
      perim_from += nb.shared_length;
      perim_to += nb.shared_length;
    } else if (dx == to_district) {
      perim_from -= nb.shared_length;
      perim_to -= nb.shared_length;
    } else {
      perim_from -= nb.shared_length;
      perim_to += nb.shared_length;
    }
  }
  fx.from_perimeter = perim_from;
  fx.to_perimeter = perim_to;
  return fx;
}

void Plan::adjust_boundary(std::uint64_t key, int delta_count, FlipDelta& delta) {
  const auto it = boundary_counts_.find(key);
  const int prior = it == boundary_counts_.end() ? 0 : it->second;
  delta.prior_boundary.emplace_back(key, prior);
  const int next = prior + delta_count;
  if (next == 0) {
    if (it != boundary_counts_.end()) boundary_counts_.erase(it);
  } else if (it == boundary_counts_.end()) {
    boundary_counts_.emplace(key, next);
  } else {
    it->second = next;
  }
}

FlipDelta Plan::apply_flip(int ward, int to_district) {
  if (ward < 0 || ward >= graph_->num_wards()) {
    throw Error("apply_flip: unknown ward " + std::to_string(ward));
  }
  if (to_district < 0 || to_district >= num_districts_) {
    throw Error("apply_flip: unknown district " + std::to_string(to_district));
  }
  const int from = district_of(ward);
  if (from == to_district) {
    throw Error("apply_flip: ward " + std::to_string(ward) + " already in district " +
                std::to_string(to_district));
  }
  if (size(from) == 1) {
    throw Error("apply_flip: flip would empty district " + std::to_string(from));
  }

  const FlipEffect fx = flip_effect(ward, to_district);

  FlipDelta delta;
  delta.ward = ward;
  delta.from_district = from;
  delta.to_district = to_district;
  delta.from_population = population(from);
  delta.to_population = population(to_district);
  delta.from_rep = rep_votes(from);
  delta.to_rep = rep_votes(to_district);
  delta.from_dem = dem_votes(from);
  delta.to_dem = dem_votes(to_district);
  delta.from_area = area(from);
  delta.to_area = area(to_district);
  delta.from_perimeter = perimeter(from);
  delta.to_perimeter = perimeter(to_district);
  delta.from_size = size(from);
  delta.to_size = size(to_district);
  delta.prior_boundary.reserve(static_cast<std::size_t>(graph_->degree(ward)) * 2 + 2);

  // Every neighbor sees one of its adjacent wards leave `from` and join
  // `to_district`; its own membership is untouched.
  for (const Neighbor& nb : graph_->neighbors(ward)) {
    const int dx = assignment_[static_cast<std::size_t>(nb.ward)];
    if (dx != from) adjust_boundary(boundary_key(nb.ward, from), -1, delta);
    if (dx != to_district) adjust_boundary(boundary_key(nb.ward, to_district), +1, delta);
  }
  // The flipped ward's own pair set: the destination stops being foreign and
  // the source starts being foreign (if any neighbors remain there).
  const auto to_key = boundary_key(ward, to_district);
  if (const auto it = boundary_counts_.find(to_key); it != boundary_counts_.end()) {
    delta.prior_boundary.emplace_back(to_key, it->second);
    boundary_counts_.erase(it);
  }
  int neighbors_in_from = 0;
  for (const Neighbor& nb : graph_->neighbors(ward)) {
    if (assignment_[static_cast<std::size_t>(nb.ward)] == from) ++neighbors_in_from;
  }
  if (neighbors_in_from > 0) {
    delta.prior_boundary.emplace_back(boundary_key(ward, from), 0);
    boundary_counts_.emplace(boundary_key(ward, from), neighbors_in_from);
  }

  assignment_[static_cast<std::size_t>(ward)] = to_district;
  const auto fi = static_cast<std::size_t>(from);
  const auto ti = static_cast<std::size_t>(to_district);
  population_[fi] = fx.from_population;
  population_[ti] = fx.to_population;
  rep_votes_[fi] = fx.from_rep;
  rep_votes_[ti] = fx.to_rep;
  dem_votes_[fi] = fx.from_dem;
  dem_votes_[ti] = fx.to_dem;
  area_[fi] = fx.from_area;
  area_[ti] = fx.to_area;
  perimeter_[fi] = fx.from_perimeter;
  perimeter_[ti] = fx.to_perimeter;
  --size_[fi];
  ++size_[ti];

  delta.prior_serial = op_serial_;
  op_serial_ = ++serial_counter_;
  delta.op_serial = op_serial_;
  return delta;
}

void Plan::revert_flip(const FlipDelta& delta) {
  if (delta.op_serial != op_serial_ || delta.ward < 0) {
    throw Error("revert_flip: delta does not undo this plan's most recent flip");
  }
  assignment_[static_cast<std::size_t>(delta.ward)] = delta.from_district;
  const auto fi = static_cast<std::size_t>(delta.from_district);
  const auto ti = static_cast<std::size_t>(delta.to_district);
  population_[fi] = delta.from_population;
  population_[ti] = delta.to_population;
  rep_votes_[fi] = delta.from_rep;
  rep_votes_[ti] = delta.to_rep;
  dem_votes_[fi] = delta.from_dem;
  dem_votes_[ti] = delta.to_dem;
  area_[fi] = delta.from_area;
  area_[ti] = delta.to_area;
  perimeter_[fi] = delta.from_perimeter;
  perimeter_[ti] = delta.to_perimeter;
  size_[fi] = delta.from_size;
  size_[ti] = delta.to_size;
  for (const auto& [key, prior] : delta.prior_boundary) {
    if (prior == 0) {
      boundary_counts_.erase(key);
    } else {
      boundary_counts_[key] = prior;
    }
  }
  op_serial_ = delta.prior_serial;
}

}  // namespace wardwalk
