#include <benchmark/benchmark.h>

#include "wardwalk/chain.hpp"
#include "wardwalk/constraints.hpp"
#include "wardwalk/gridkit.hpp"
#include "wardwalk/plan.hpp"
#include "wardwalk/rng.hpp"

namespace {

using namespace wardwalk;

GridSpec big_grid() {
  GridSpec spec;
  spec.rows = 100;
  spec.cols = 100;
  spec.num_districts = 10;
  return spec;
}

ValidityConfig loose_validity() {
  ValidityConfig cfg;
  cfg.pop_tolerance_wards = 5.0;
  cfg.compactness_budget = 1.2;
  return cfg;
}

// The throughput bar lives here: one call is one chain step (including
// rejected proposals, which are real steps) on a 10^4-node instance.
void BM_ChainStep(benchmark::State& state) {
  const DualGraph graph = make_grid(big_grid());
  const ValidityConfig cfg = loose_validity();
  Plan plan(graph);
  const double seed_score = compactness_score(plan, cfg.compactness_mode);
  Xoshiro256PlusPlus rng(2024);

  for (auto _ : state) {
    const StepOutcome out = chain_step(plan, cfg, seed_score, rng, false);
    benchmark::DoNotOptimize(out.label);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ChainStep);

void BM_ValidityCheck(benchmark::State& state) {
  const DualGraph graph = make_grid(big_grid());
  const ValidityConfig cfg = loose_validity();
  Plan plan(graph);
  const double seed_score = compactness_score(plan, cfg.compactness_mode);
  Xoshiro256PlusPlus rng(2024);

  for (auto _ : state) {
    const Proposal p = propose(rng, graph);
    benchmark::DoNotOptimize(
        is_valid_flip(plan, cfg, seed_score, {p.ward, p.to_district}));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ValidityCheck);

void BM_ApplyRevert(benchmark::State& state) {
  const DualGraph graph = make_grid(big_grid());
  Plan plan(graph);
  // A ward on the seam between the first two column bands.
  const int ward = 9;
  const int to_district = 1;

  for (auto _ : state) {
    const FlipDelta delta = plan.apply_flip(ward, to_district);
    plan.revert_flip(delta);
    benchmark::DoNotOptimize(plan.op_serial());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ApplyRevert);

}  // namespace

BENCHMARK_MAIN();
