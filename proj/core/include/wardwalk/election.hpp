#pragma once

#include <span>
#include <utility>
#include <vector>

#include "wardwalk/plan.hpp"

namespace wardwalk {

struct DistrictTally {
  double rep = 0.0;
  double dem = 0.0;
};

// Outcome of the proxy election on one districting. Districts with an exact
// vote tie award a seat to neither party and are listed in tied_districts.
struct ElectionResult {
  std::vector<DistrictTally> tallies;
  int rep_seats = 0;
  int dem_seats = 0;
  std::vector<int> tied_districts;
  double efficiency_gap = 0.0;
};

// Wasted-votes efficiency gap. A district's winner wastes every vote above
// half the district total; the loser wastes all of its votes; in an exact tie
// both full counts are wasted. Positive values mean Democrats waste more,
// i.e. the plan favors Republicans. Throws on a zero-vote district.
double efficiency_gap_from_tallies(std::span<const DistrictTally> tallies);

double efficiency_gap(const Plan& plan);

// The trajectory's label function: the efficiency gap, oriented so that
// larger means more Republican-favoring.
double label(const Plan& plan);

ElectionResult evaluate_election(const Plan& plan);

std::pair<int, int> seats(const ElectionResult& result);

}  // namespace wardwalk
