#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wardwalk/rng.hpp"

namespace wardwalk {

// Final statistics of one trajectory, mirroring one row of the significance
// table: the seed's label, how many states were at least as extreme, and the
// resulting outlier bound, together with enough configuration echo to
// identify the run.
struct EpsilonReport {
  double seed_label = 0.0;
  long long total_states = 0;
  long long as_bad_count = 0;
  double epsilon = 0.0;
  double p_value = 0.0;
  std::string mode;
  bool enforce_counties = false;
  bool enforce_mm = false;
  std::uint64_t rng_seed = 0;
  long long steps = 0;
  std::string graph_hash;
  std::string rng_algorithm;
};

// Significance bound for an epsilon-outlier on a reversible chain trajectory:
// min(1, sqrt(2 * epsilon)). Throws unless 0 < epsilon <= 1.
double p_value(double epsilon);

// Streaming counter for the outlier rank of the seed state. Labels at least
// as large as the seed's count as "as bad". Also keeps a uniform reservoir
// sample of labels for the optional histogram; the reservoir never feeds the
// epsilon counts.
class EpsilonAccumulator {
 public:
  EpsilonAccumulator(double seed_label, std::uint64_t reservoir_seed,
                     std::size_t reservoir_capacity = 100000);

  // Feed one trajectory state's label; the seed state itself must be the
  // first call. Throws on a non-finite label.
  void observe(double label);

  double seed_label() const { return seed_label_; }
  long long total_states() const { return total_; }
  long long as_bad_count() const { return as_bad_; }
  const std::vector<double>& reservoir() const { return reservoir_; }

  // Counts, epsilon and p of the states seen so far. Throws if nothing was
  // observed. Configuration echo fields are left for the caller to fill.
  EpsilonReport finalize() const;

 private:
  double seed_label_ = 0.0;
  long long total_ = 0;
  long long as_bad_ = 0;
  std::size_t capacity_ = 0;
  std::vector<double> reservoir_;
  Xoshiro256PlusPlus rng_;
};

std::string report_to_json(const EpsilonReport& report);
EpsilonReport report_from_json(const std::string& text);

}  // namespace wardwalk
