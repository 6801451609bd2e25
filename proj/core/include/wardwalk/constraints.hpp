#pragma once

#include <string>

#include "wardwalk/plan.hpp"

namespace wardwalk {

// The three selectable district-geometry scores. PERIMETER sums district
// perimeters; L1 and L2 are the 1- and 2-norms of the per-district
// isoperimetric ratio vector (perimeter squared over area).
enum class CompactnessMode { kPerimeter, kL1, kL2 };

std::string to_string(CompactnessMode mode);
CompactnessMode compactness_mode_from_string(const std::string& text);

// Machine encoding of the five validity properties. Contiguity is always
// enforced; the other knobs select tolerance, geometry mode and budget, and
// whether the county and majority-minority properties apply.
struct ValidityConfig {
  double pop_tolerance_wards = 1.0;
  CompactnessMode compactness_mode = CompactnessMode::kPerimeter;
  double compactness_budget = 1.0;
  bool enforce_counties = false;
  bool enforce_mm = false;
};

struct Flip {
  int ward = -1;
  int to_district = -1;
};

// Plan-level geometry score for the active mode.
double compactness_score(const Plan& plan, CompactnessMode mode);

// True iff each district population stays strictly within the tolerance band
// around the ideal district population after the flip.
bool check_population(const Plan& plan, const ValidityConfig& cfg, Flip flip);

// True iff the ward borders the target district and the source district
// stays connected once the ward leaves.
bool check_contiguity(const Plan& plan, Flip flip);

// True iff the post-flip score stays within budget relative to the seed
// plan's score. Evaluated via the incremental effect on the two districts
// the flip touches.
bool check_compactness(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Flip flip);

// Vetoes flips that would break an intact multi-ward county or change the
// membership of a frozen (majority-minority) district in either direction.
bool check_county_and_frozen(const DualGraph& graph, const ValidityConfig& cfg, Flip flip);

// Conjunction of all properties plus the nonempty-source rule, cheapest
// checks first. Pure: the plan is not mutated.
bool is_valid_flip(const Plan& plan, const ValidityConfig& cfg, double seed_score,
                   Flip flip);

// Verifies that the seed plan itself satisfies every property (with budget
// factor >= 1); throws SeedError naming the violated property otherwise.
void require_seed_valid(const Plan& plan, const ValidityConfig& cfg);

}  // namespace wardwalk
