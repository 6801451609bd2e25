#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wardwalk/constraints.hpp"
#include "wardwalk/graph.hpp"
#include "wardwalk/plan.hpp"

namespace wardwalk {

// Synthetic rows x cols instance of unit-square cells with rook adjacency.
// Cells are numbered row-major. The default seed districting bands cells in
// serpentine column order (down one column, up the next), so every band is
// connected; vote defaults follow a left-to-right partisan gradient so the
// efficiency gap varies across plans.
struct GridSpec {
  int rows = 0;
  int cols = 0;
  int num_districts = 1;
  double uniform_population = 1.0;
  double vote_unit = 10.0;
  // Optional per-cell overrides, row-major, size rows*cols when present.
  std::vector<double> cell_population;
  std::vector<double> cell_rep;
  std::vector<double> cell_dem;
  std::vector<std::string> cell_county;
  std::vector<int> seed_assignment;
  // Districts whose member cells are marked frozen in the seed districting.
  std::vector<int> frozen_districts;
};

DualGraph make_grid(const GridSpec& spec);

// From-scratch district statistics, computed by plain loops with no shared
// code with the incremental caches.
struct DistrictStatsOracle {
  std::vector<double> population, rep_votes, dem_votes, area, perimeter;
  std::vector<int> size;
};
DistrictStatsOracle oracle_district_stats(const DualGraph& graph,
                                          const std::vector<int>& assignment);

std::vector<std::pair<int, int>> oracle_boundary_pairs(const DualGraph& graph,
                                                       const std::vector<int>& assignment);

// Global validity of a full assignment: districts nonempty and connected,
// populations inside the strict tolerance band, geometry within budget, and
// the county / frozen-district properties relative to the seed districting
// carried by the graph.
bool oracle_assignment_valid(const DualGraph& graph, const ValidityConfig& cfg,
                             double seed_score, const std::vector<int>& assignment);

// Rebuilds the post-flip assignment and re-tests every property from
// scratch. Must agree with is_valid_flip everywhere.
bool oracle_valid_flip(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Flip flip);

// Exhaustively enumerates every valid assignment relative to the seed plan,
// in lexicographic order. Throws once more than max_explored search nodes
// have been expanded.
std::vector<std::vector<int>> enumerate_valid_plans(const DualGraph& graph,
                                                    const ValidityConfig& cfg,
                                                    const Plan& seed_plan,
                                                    std::size_t max_explored = 5000000);

}  // namespace wardwalk
