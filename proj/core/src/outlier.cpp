#include "wardwalk/outlier.hpp"

#include <cmath>

#include <json.hpp>

#include "wardwalk/error.hpp"

namespace wardwalk {

double p_value(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error("p_value: epsilon must lie in (0, 1]");
  }
  return std::min(1.0, std::sqrt(2.0 * epsilon));
}

EpsilonAccumulator::EpsilonAccumulator(double seed_label, std::uint64_t reservoir_seed,
                                       std::size_t reservoir_capacity)
    : seed_label_(seed_label), capacity_(reservoir_capacity), rng_(reservoir_seed) {
  if (!std::isfinite(seed_label)) {
    throw Error("seed label is not finite");
  }
  reservoir_.reserve(std::min<std::size_t>(capacity_, 1 << 20));
}

void EpsilonAccumulator::observe(double label) {
  if (!std::isfinite(label)) {
    throw Error("non-finite label at trajectory state " + std::to_string(total_ + 1));
  }
  ++total_;
  if (label >= seed_label_) ++as_bad_;
  if (capacity_ == 0) return;
  if (reservoir_.size() < capacity_) {
    reservoir_.push_back(label);
  } else {
    const std::uint64_t j = rng_.bounded(static_cast<std::uint64_t>(total_));
    if (j < capacity_) reservoir_[static_cast<std::size_t>(j)] = label;
  }
}

EpsilonReport EpsilonAccumulator::finalize() const {
  if (total_ == 0) {
    throw Error("cannot finalize an empty accumulator");
  }
  EpsilonReport report;
  report.seed_label = seed_label_;
  report.total_states = total_;
  report.as_bad_count = as_bad_;
  report.epsilon = static_cast<double>(as_bad_) / static_cast<double>(total_);
  report.p_value = p_value(report.epsilon);
  return report;
}

std::string report_to_json(const EpsilonReport& report) {
  nlohmann::json j;
  j["seed_label"] = report.seed_label;
  j["total_states"] = report.total_states;
  j["as_bad_count"] = report.as_bad_count;
  j["epsilon"] = report.epsilon;
  j["p_value"] = report.p_value;
  j["mode"] = report.mode;
  j["enforce_counties"] = report.enforce_counties;
  j["enforce_mm"] = report.enforce_mm;
  j["rng_seed"] = report.rng_seed;
  j["steps"] = report.steps;
  j["graph_hash"] = report.graph_hash;
  j["rng_algorithm"] = report.rng_algorithm;
  return j.dump(2) + "\n";
}

EpsilonReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  EpsilonReport report;
  try {
    report.seed_label = j.at("seed_label").get<double>();
    report.total_states = j.at("total_states").get<long long>();
    report.as_bad_count = j.at("as_bad_count").get<long long>();
    report.epsilon = j.at("epsilon").get<double>();
    report.p_value = j.at("p_value").get<double>();
    report.mode = j.at("mode").get<std::string>();
    report.enforce_counties = j.at("enforce_counties").get<bool>();
    report.enforce_mm = j.at("enforce_mm").get<bool>();
    report.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    report.steps = j.at("steps").get<long long>();
    report.graph_hash = j.at("graph_hash").get<std::string>();
    report.rng_algorithm = j.at("rng_algorithm").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is missing a required field: ") + e.what());
  }
  return report;
}

}  // namespace wardwalk
