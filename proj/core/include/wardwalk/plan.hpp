#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wardwalk/graph.hpp"

namespace wardwalk {

// Post-flip values of every per-district statistic touched by moving one
// ward. Produced by Plan::flip_effect and consumed both by the validity
// predicates and by apply_flip itself, so a predicted statistic and the
// applied one are computed by the same arithmetic and agree bitwise.
struct FlipEffect {
  int ward = -1;
  int from_district = -1;
  int to_district = -1;
  double from_population = 0.0, to_population = 0.0;
  double from_rep = 0.0, to_rep = 0.0;
  double from_dem = 0.0, to_dem = 0.0;
  double from_area = 0.0, to_area = 0.0;
  double from_perimeter = 0.0, to_perimeter = 0.0;
};

// Undo record for one applied flip: the prior values of everything the flip
// changed, plus the state versions before and after the flip. Deltas revert
// in strict LIFO order; a delta whose flip is not the plan's latest
// un-reverted operation is stale and refused. Reverting restores caches
// bitwise.
struct FlipDelta {
  int ward = -1;
  int from_district = -1;
  int to_district = -1;
  std::uint64_t prior_serial = 0;
  std::uint64_t op_serial = 0;
  double from_population = 0.0, to_population = 0.0;
  double from_rep = 0.0, to_rep = 0.0;
  double from_dem = 0.0, to_dem = 0.0;
  double from_area = 0.0, to_area = 0.0;
  double from_perimeter = 0.0, to_perimeter = 0.0;
  int from_size = 0, to_size = 0;
  // (boundary key, previous neighbor count); count 0 means the key was absent.
  std::vector<std::pair<std::uint64_t, int>> prior_boundary;
};

// A districting: assignment of every ward to a district, with per-district
// statistics and the ward/foreign-district boundary index maintained
// incrementally under single-ward flips. Owned by exactly one chain at a
// time; the underlying graph is shared and read-only.
class Plan {
 public:
  explicit Plan(const DualGraph& graph);
  Plan(const DualGraph& graph, std::vector<int> assignment);

  const DualGraph& graph() const { return *graph_; }
  int num_districts() const { return num_districts_; }
  int district_of(int ward) const { return assignment_[static_cast<std::size_t>(ward)]; }
  const std::vector<int>& assignment() const { return assignment_; }

  double population(int district) const { return population_[static_cast<std::size_t>(district)]; }
  double rep_votes(int district) const { return rep_votes_[static_cast<std::size_t>(district)]; }
  double dem_votes(int district) const { return dem_votes_[static_cast<std::size_t>(district)]; }
  double area(int district) const { return area_[static_cast<std::size_t>(district)]; }
  double perimeter(int district) const { return perimeter_[static_cast<std::size_t>(district)]; }
  int size(int district) const { return size_[static_cast<std::size_t>(district)]; }

  // True iff the ward has at least one neighbor in the given district and is
  // not itself a member. Constant time.
  bool on_boundary(int ward, int district) const {
    if (district_of(ward) == district) return false;
    return boundary_counts_.count(boundary_key(ward, district)) != 0;
  }
  std::size_t boundary_pair_count() const { return boundary_counts_.size(); }
  std::vector<std::pair<int, int>> boundary_pairs_sorted() const;

  // Post-flip statistics for moving `ward` to `to_district`, without mutating
  // anything. Cost proportional to the ward's degree.
  FlipEffect flip_effect(int ward, int to_district) const;

  FlipDelta apply_flip(int ward, int to_district);
  void revert_flip(const FlipDelta& delta);

  // Version of the current state. Fresh plans start at 0; every apply moves
  // to a never-before-seen version and every revert moves back to the
  // version the delta was taken from.
  std::uint64_t op_serial() const { return op_serial_; }

 private:
  std::uint64_t boundary_key(int ward, int district) const {
    return static_cast<std::uint64_t>(ward) *
               static_cast<std::uint64_t>(num_districts_) +
           static_cast<std::uint64_t>(district);
  }
  void adjust_boundary(std::uint64_t key, int delta_count, FlipDelta& delta);
  void set_boundary_from_scratch();

  const DualGraph* graph_ = nullptr;
  int num_districts_ = 0;
  std::vector<int> assignment_;
  std::vector<double> population_, rep_votes_, dem_votes_, area_, perimeter_;
  std::vector<int> size_;
  // key = ward * num_districts + district -> number of that ward's neighbors
  // living in that (foreign) district. Entries with count 0 are erased.
  std::unordered_map<std::uint64_t, int> boundary_counts_;
  std::uint64_t op_serial_ = 0;
  std::uint64_t serial_counter_ = 0;
};

}  // namespace wardwalk
