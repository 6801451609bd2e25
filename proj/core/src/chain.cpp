#include "wardwalk/chain.hpp"

#include "wardwalk/election.hpp"
#include "wardwalk/error.hpp"
#include "wardwalk/io.hpp"

namespace wardwalk {

Proposal propose(Xoshiro256PlusPlus& rng, const DualGraph& graph) {
  Proposal p;
  p.ward = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(graph.num_wards())));
  p.to_district =
      static_cast<int>(rng.bounded(static_cast<std::uint64_t>(graph.num_districts())));
  return p;
}

StepOutcome chain_step(Plan& plan, const ValidityConfig& cfg, double seed_score,
                       Xoshiro256PlusPlus& rng, bool lazy) {
  StepOutcome out;
  if (lazy && rng.bounded(2) == 0) {
    out.label = label(plan);
    return out;
  }
  out.proposal = propose(rng, plan.graph());
  const Flip flip{out.proposal.ward, out.proposal.to_district};
  if (is_valid_flip(plan, cfg, seed_score, flip)) {
    plan.apply_flip(flip.ward, flip.to_district);
    out.accepted = true;
  }
  out.label = label(plan);
  return out;
}

namespace {

void write_trace_line(std::ostream& trace, long long step, const StepOutcome& out) {
  trace << step << ',' << (out.accepted ? '1' : '0') << ',' << out.proposal.ward << ','
        << out.proposal.to_district << ',' << format_double(out.label) << '\n';
  if (!trace) {
    throw IoError("trace sink write failure at step " + std::to_string(step));
  }
}

}  // namespace

EpsilonReport run_trajectory(Plan& plan, const ValidityConfig& vcfg,
                             const ChainConfig& ccfg, std::ostream* trace,
                             std::vector<double>* reservoir_out) {
  if (ccfg.steps < 1) throw ConfigError("chain steps must be >= 1");
  if (ccfg.record_every < 1) throw ConfigError("record_every must be >= 1");
  require_seed_valid(plan, vcfg);
  const double seed_score = compactness_score(plan, vcfg.compactness_mode);

  Xoshiro256PlusPlus rng(Xoshiro256PlusPlus::stream_seed(ccfg.rng_seed, 0));
  EpsilonAccumulator acc(label(plan), Xoshiro256PlusPlus::stream_seed(ccfg.rng_seed, 1),
                         ccfg.reservoir_capacity);
  acc.observe(acc.seed_label());

  if (trace != nullptr) {
    *trace << "step,accepted,ward,to_district,label\n";
    if (!*trace) throw IoError("trace sink write failure on header");
  }
  for (long long step = 1; step <= ccfg.steps; ++step) {
    const StepOutcome out = chain_step(plan, vcfg, seed_score, rng, ccfg.lazy);
    acc.observe(out.label);
    if (trace != nullptr && step % ccfg.record_every == 0) {
      write_trace_line(*trace, step, out);
    }
  }
  if (trace != nullptr) {
    trace->flush();
    if (!*trace) throw IoError("trace sink write failure on flush");
  }

  EpsilonReport report = acc.finalize();
  report.mode = to_string(vcfg.compactness_mode);
  report.enforce_counties = vcfg.enforce_counties;
  report.enforce_mm = vcfg.enforce_mm;
  report.rng_seed = ccfg.rng_seed;
  report.steps = ccfg.steps;
  report.graph_hash = plan.graph().content_hash();
  report.rng_algorithm = Xoshiro256PlusPlus::kAlgorithm;
  if (reservoir_out != nullptr) *reservoir_out = acc.reservoir();
  return report;
}

}  // namespace wardwalk
