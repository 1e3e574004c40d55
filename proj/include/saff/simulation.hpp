#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "saff/fairness_metrics.hpp"
#include "saff/feedback_model.hpp"
#include "saff/learner.hpp"

namespace saff {

struct Population {
  std::vector<PreferenceWeight> members;
};

// Six independent uniform(0,1) draws normalized to sum 1.
PreferenceWeight sample_preference(Rng& rng);
Population sample_population(std::size_t participants, Rng& rng);

// Per-group knob for one attribute.
struct GroupOffsets {
  double privileged = 0.0;
  double underprivileged = 0.0;
};

// Synthetic stand-in for registry-derived tuples. Each recipient gets
//   arp = clamp(base_rate + sum of group offsets + U(-spread, spread))
// and the surgeon decision copies the thresholded prediction, flipped with
// probability decision_noise + sum of group noise offsets.
struct BiasConfig {
  double base_rate = 0.5;
  double spread = 0.5;
  double decision_noise = 0.1;
  std::array<GroupOffsets, 3> offsets{};        // indexed by Attribute
  std::array<GroupOffsets, 3> noise_offsets{};  // indexed by Attribute
  GroupDefinitions groups;
  double threshold = 0.5;

  GroupOffsets& offset(Attribute a) { return offsets[static_cast<std::size_t>(a)]; }
  GroupOffsets& noise_offset(Attribute a) {
    return noise_offsets[static_cast<std::size_t>(a)];
  }
  void validate() const;
};

// For K >= 4 every tuple holds both groups of every attribute.
std::vector<DataTuple> generate_tuples(std::size_t tuples, std::size_t pairs_per_tuple,
                                       const BiasConfig& bias, Rng& rng);

std::vector<FairnessProfile> tuple_profiles(std::span<const DataTuple> tuples,
                                            const GroupSpec& group);

ResponseSet simulate_responses(const Population& population,
                               std::span<const FairnessProfile> profiles,
                               const FeedbackParams& params, Attribute attribute,
                               Rng& rng);

struct ExperimentGrid {
  std::vector<std::size_t> participant_counts = {25, 50, 75, 100};
  std::vector<std::size_t> tuple_counts = {5, 10, 15};
  std::size_t pairs_per_tuple = kDefaultPairsPerTuple;
  std::size_t repetitions = 100;
  Attribute attribute = Attribute::age;
  LearnerConfig learner;
  BiasConfig bias;
  std::uint64_t seed = 0;
  bool compare_uniform_init = true;
  unsigned threads = 0;  // 0 selects hardware concurrency

  void validate() const;
};

// One fully sampled repetition of a grid cell.
struct SimulatedInstance {
  Population population;
  std::vector<DataTuple> tuples;
  std::vector<FairnessProfile> profiles;
  ResponseSet responses;
  LearnerConfig learner;
};

// Seed for repetition `rep` of cell `cell`: master seed plus a fixed stride.
std::uint64_t repetition_seed(const ExperimentGrid& grid, std::size_t cell,
                              std::size_t rep);

SimulatedInstance make_instance(const ExperimentGrid& grid, std::size_t participants,
                                std::size_t tuples, std::uint64_t seed);

struct CellResult {
  std::size_t participants = 0;
  std::size_t tuples = 0;
  std::vector<double> mean_regret;  // per epoch
  std::vector<double> sd_regret;    // per epoch, population standard deviation
  double mean_initial_regret = 0.0;
  double mean_final_regret = 0.0;
  double mean_reduction_random = 0.0;
  double mean_reduction_uniform = 0.0;  // 0 unless compare_uniform_init
  std::size_t flagged_notions = 0;      // across all sampled profiles
  std::size_t profiles_evaluated = 0;
};

struct GridResult {
  std::vector<CellResult> cells;  // participant-major order
};

GridResult run_grid(const ExperimentGrid& grid);

}  // namespace saff
