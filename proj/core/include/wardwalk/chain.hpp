#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "wardwalk/constraints.hpp"
#include "wardwalk/outlier.hpp"
#include "wardwalk/plan.hpp"
#include "wardwalk/rng.hpp"

namespace wardwalk {

struct ChainConfig {
  long long steps = 1;
  std::uint64_t rng_seed = 0;
  // If set, each step first holds in place with probability 1/2.
  bool lazy = false;
  // Thinning for the optional trace stream; the epsilon counter always sees
  // every step regardless.
  long long record_every = 1;
  // Size of the label reservoir kept for the optional histogram.
  std::size_t reservoir_capacity = 100000;
};

struct Proposal {
  int ward = -1;
  int to_district = -1;
  bool none() const { return ward < 0; }
};

struct StepOutcome {
  Proposal proposal;
  bool accepted = false;
  // Label of the plan after the step, whether or not the proposal was taken.
  double label = 0.0;
};

// One uniform draw from the fixed proposal universe: every (ward, district)
// pair, including pairs that cannot be applied. Rejecting those downstream
// keeps the proposal kernel symmetric, which is what makes the stationary
// distribution uniform over valid plans.
Proposal propose(Xoshiro256PlusPlus& rng, const DualGraph& graph);

// Advances the chain by one step. An invalid proposal leaves the plan
// unchanged; that self-loop is a real step of the chain.
StepOutcome chain_step(Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Xoshiro256PlusPlus& rng, bool lazy);

// Runs the full trajectory from the (validated) seed plan, feeding every
// step's label to the epsilon accumulator and optionally streaming thinned
// step records to `trace`. The chain and the reservoir draw from separate
// substreams of cfg.rng_seed, so the trajectory is a pure function of
// (graph, seed plan, configs). If reservoir_out is non-null it receives the
// label sample for histogram rendering.
EpsilonReport run_trajectory(Plan& plan, const ValidityConfig& vcfg,
                             const ChainConfig& ccfg, std::ostream* trace = nullptr,
                             std::vector<double>* reservoir_out = nullptr);

}  // namespace wardwalk
