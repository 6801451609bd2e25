#include "wardwalk/election.hpp"

#include <string>

#include "wardwalk/error.hpp"

namespace wardwalk {

double efficiency_gap_from_tallies(std::span<const DistrictTally> tallies) {
  double wasted_rep = 0.0;
  double wasted_dem = 0.0;
  double total = 0.0;
  for (std::size_t d = 0; d < tallies.size(); ++d) {
    const double rep = tallies[d].rep;
    const double dem = tallies[d].dem;
    const double t = rep + dem;
    if (t <= 0.0) {
      throw Error("district " + std::to_string(d) + " has no votes; efficiency gap undefined");
    }
    if (rep > dem) {
      wasted_rep += rep - t / 2.0;
      wasted_dem += dem;
    } else if (dem > rep) {
      wasted_dem += dem - t / 2.0;
      wasted_rep += rep;
    } else {
      wasted_rep += rep;
      wasted_dem += dem;
    }
    total += t;
  }
  return (wasted_dem - wasted_rep) / total;
}

namespace {

std::vector<DistrictTally> tallies_of(const Plan& plan) {
  std::vector<DistrictTally> tallies(static_cast<std::size_t>(plan.num_districts()));
  for (int d = 0; d < plan.num_districts(); ++d) {
    tallies[static_cast<std::size_t>(d)] = {plan.rep_votes(d), plan.dem_votes(d)};
  }
  return tallies;
}

}  // namespace

// Allocation-free twin of efficiency_gap_from_tallies for the chain's hot
// path; mirrors its arithmetic exactly so the two agree bitwise.
double efficiency_gap(const Plan& plan) {
  double wasted_rep = 0.0;
  double wasted_dem = 0.0;
  double total = 0.0;
  for (int d = 0; d < plan.num_districts(); ++d) {
    const double rep = plan.rep_votes(d);
    const double dem = plan.dem_votes(d);
    const double t = rep + dem;
    if (t <= 0.0) {
      throw Error("district " + std::to_string(d) + " has no votes; efficiency gap undefined");
    }
    if (rep > dem) {
      wasted_rep += rep - t / 2.0;
      wasted_dem += dem;
    } else if (dem > rep) {
      wasted_dem += dem - t / 2.0;
      wasted_rep += rep;
    } else {
      wasted_rep += rep;
      wasted_dem += dem;
    }
    total += t;
  }
  return (wasted_dem - wasted_rep) / total;
}

double label(const Plan& plan) { return efficiency_gap(plan); }

ElectionResult evaluate_election(const Plan& plan) {
  ElectionResult result;
  result.tallies = tallies_of(plan);
  result.efficiency_gap = efficiency_gap_from_tallies(result.tallies);
  for (int d = 0; d < plan.num_districts(); ++d) {
    const DistrictTally& t = result.tallies[static_cast<std::size_t>(d)];
    if (t.rep > t.dem) {
      ++result.rep_seats;
    } else if (t.dem > t.rep) {
      ++result.dem_seats;
    } else {
      result.tied_districts.push_back(d);
    }
  }
  return result;
}

std::pair<int, int> seats(const ElectionResult& result) {
  return {result.rep_seats, result.dem_seats};
}

}  // namespace wardwalk
