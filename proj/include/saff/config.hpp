#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "saff/fairness_metrics.hpp"
#include "saff/feedback_model.hpp"
#include "saff/learner.hpp"
#include "saff/simulation.hpp"

namespace saff {

struct SimulationSettings {
  std::vector<std::size_t> participant_counts = {25, 50, 75, 100};
  std::vector<std::size_t> tuple_counts = {5, 10, 15};
  std::size_t pairs_per_tuple = kDefaultPairsPerTuple;
  std::size_t repetitions = 100;
  bool compare_uniform_init = true;
  unsigned threads = 0;
  BiasConfig bias;
  // Shape of the synthetic tuple/response files written by `simulate`.
  std::size_t dataset_participants = 75;
  std::size_t dataset_tuples = 10;
};

// Everything a run needs besides its input files. Parsed from one JSON
// document; absent keys keep the defaults below, unknown keys are rejected.
struct RunConfig {
  FeedbackParams params;
  double step_size = 0.1;
  int epochs = 20;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::vector<Attribute> attributes = {Attribute::age, Attribute::gender, Attribute::race};
  InitMode init_mode = InitMode::random;
  GroupDefinitions groups;
  SimulationSettings simulation;

  void validate() const;

  LearnerConfig learner() const;
  GroupSpec group(Attribute attribute) const;
  ExperimentGrid grid(Attribute attribute) const;
};

RunConfig parse_config(std::string_view json_text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON rendering; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const RunConfig& config);

// "age", "gender", "race" or "all".
std::vector<Attribute> parse_attribute_selection(std::string_view text);

}  // namespace saff
