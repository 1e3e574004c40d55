#include "saff/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <future>
#include <thread>

#include "saff/error.hpp"

namespace saff {

PreferenceWeight sample_preference(Rng& rng) {
  return initial_weight(InitMode::random, rng);
}

Population sample_population(std::size_t participants, Rng& rng) {
  Population pop;
  pop.members.reserve(participants);
  for (std::size_t n = 0; n < participants; ++n) pop.members.push_back(sample_preference(rng));
  return pop;
}

void BiasConfig::validate() const {
  if (!(base_rate > 0.0 && base_rate < 1.0))
    fail(ErrorCategory::config, "bias base_rate must lie in (0,1)");
  if (!(spread >= 0.0 && spread <= 1.0))
    fail(ErrorCategory::config, "bias spread must lie in [0,1]");
  if (!(decision_noise >= 0.0 && decision_noise <= 0.5))
    fail(ErrorCategory::config, "bias decision_noise must lie in [0,0.5]");
  for (const auto* table : {&offsets, &noise_offsets})
    for (const auto& o : *table)
      if (std::abs(o.privileged) > 0.5 || std::abs(o.underprivileged) > 0.5)
        fail(ErrorCategory::config, "bias group offsets must lie in [-0.5,0.5]");
  if (!(threshold > 0.0 && threshold < 1.0))
    fail(ErrorCategory::config, "threshold must lie in (0,1)");
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(unit_uniform(rng) * static_cast<double>(hi - lo + 1));
}

bool coin(Rng& rng, double p) { return unit_uniform(rng) < p; }

// Group membership per attribute, with both groups present when k >= 4.
std::vector<std::array<bool, 3>> draw_memberships(std::size_t k, Rng& rng) {
  std::vector<std::array<bool, 3>> privileged(k);
  for (auto& row : privileged)
    for (bool& p : row) p = coin(rng, 0.5);
  if (k >= 4) {
    for (std::size_t a = 0; a < 3; ++a) {
      const auto first = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(k) - 1));
      auto second = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(k) - 2));
      if (second >= first) ++second;
      privileged[first][a] = true;
      privileged[second][a] = false;
    }
  }
  return privileged;
}

}  // namespace

std::vector<DataTuple> generate_tuples(std::size_t tuples, std::size_t pairs_per_tuple,
                                       const BiasConfig& bias, Rng& rng) {
  bias.validate();
  if (tuples == 0 || pairs_per_tuple < 2)
    fail(ErrorCategory::invalid_argument, "need M >= 1 tuples and K >= 2 pairs");
  const int cutoff = bias.groups.age_cutoff;
  const auto pick_race = [&](bool privileged) {
    const auto& list = bias.groups.privileged_races;
    const bool in_list = std::ranges::find(list, Race::black) != list.end();
    return (privileged == in_list) ? Race::black : Race::other;
  };
  const auto pick_gender = [&](bool privileged) {
    const auto& list = bias.groups.privileged_genders;
    const bool in_list = std::ranges::find(list, Gender::male) != list.end();
    return (privileged == in_list) ? Gender::male : Gender::female;
  };

  std::vector<DataTuple> out;
  out.reserve(tuples);
  for (std::size_t m = 0; m < tuples; ++m) {
    DataTuple t;
    t.tuple_id = "T" + std::to_string(m + 1);
    t.donor.donor_id = "D" + std::to_string(m + 1);
    t.donor.donor_age = uniform_int(rng, 18, 70);
    t.donor.donor_race = coin(rng, 0.5) ? Race::black : Race::other;
    t.donor.donor_gender = coin(rng, 0.5) ? Gender::male : Gender::female;
    t.donor.kdpi = std::round(unit_uniform(rng) * 1000.0) / 10.0;

    const auto memberships = draw_memberships(pairs_per_tuple, rng);
    for (std::size_t k = 0; k < pairs_per_tuple; ++k) {
      MatchRecord r;
      r.recipient_id = t.tuple_id + "-R" + std::to_string(k + 1);
      const auto& member = memberships[k];
      r.recipient_age = member[0] ? uniform_int(rng, 18, std::max(18, cutoff))
                                  : uniform_int(rng, cutoff + 1, std::max(cutoff + 1, 75));
      r.recipient_gender = pick_gender(member[1]);
      r.recipient_race = pick_race(member[2]);
      r.epts = std::round(unit_uniform(rng) * 1000.0) / 10.0;
      r.distance = std::round(unit_uniform(rng) * 5000.0) / 10.0;

      double probability = bias.base_rate + bias.spread * (2.0 * unit_uniform(rng) - 1.0);
      double noise = bias.decision_noise;
      for (std::size_t a = 0; a < 3; ++a) {
        const auto& o = bias.offsets[a];
        const auto& n = bias.noise_offsets[a];
        probability += member[a] ? o.privileged : o.underprivileged;
        noise += member[a] ? n.privileged : n.underprivileged;
      }
      r.arp_probability = std::clamp(probability, 0.0, 1.0);
      const int predicted = r.arp_probability >= bias.threshold ? 1 : 0;
      const bool flip = coin(rng, std::clamp(noise, 0.0, 1.0));
      r.surgeon_decision = flip ? 1 - predicted : predicted;
      t.records.push_back(std::move(r));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<FairnessProfile> tuple_profiles(std::span<const DataTuple> tuples,
                                            const GroupSpec& group) {
  std::vector<FairnessProfile> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) out.push_back(fairness_profile(t, group));
  return out;
}

ResponseSet simulate_responses(const Population& population,
                               std::span<const FairnessProfile> profiles,
                               const FeedbackParams& params, Attribute attribute,
                               Rng& rng) {
  params.validate();
  const std::size_t n_part = population.members.size();
  const std::size_t n_tuples = profiles.size();
  std::vector<std::uint8_t> scores(n_part * n_tuples);
  for (std::size_t n = 0; n < n_part; ++n) {
    for (std::size_t m = 0; m < n_tuples; ++m) {
      const auto dist =
          predicted_distribution(population.members[n].weights(), profiles[m], params);
      scores[n * n_tuples + m] = static_cast<std::uint8_t>(sample_score(dist, rng));
    }
  }
  return ResponseSet(question_for(attribute), n_part, n_tuples, std::move(scores));
}

void ExperimentGrid::validate() const {
  if (participant_counts.empty() || tuple_counts.empty())
    fail(ErrorCategory::config, "experiment grid needs participant and tuple counts");
  for (auto n : participant_counts)
    if (n == 0) fail(ErrorCategory::config, "participant counts must be positive");
  for (auto m : tuple_counts)
    if (m == 0) fail(ErrorCategory::config, "tuple counts must be positive");
  if (pairs_per_tuple < 2) fail(ErrorCategory::config, "pairs_per_tuple must be >= 2");
  if (repetitions == 0) fail(ErrorCategory::config, "repetitions must be positive");
  learner.validate();
  bias.validate();
}

std::uint64_t repetition_seed(const ExperimentGrid& grid, std::size_t cell,
                              std::size_t rep) {
  return grid.seed + 1'000'003ULL * cell + rep;
}

SimulatedInstance make_instance(const ExperimentGrid& grid, std::size_t participants,
                                std::size_t tuples, std::uint64_t seed) {
  Rng rng(seed);
  SimulatedInstance inst;
  inst.population = sample_population(participants, rng);
  inst.tuples = generate_tuples(tuples, grid.pairs_per_tuple, grid.bias, rng);
  inst.profiles = tuple_profiles(
      inst.tuples, GroupSpec::standard(grid.attribute, grid.bias.groups, grid.bias.threshold));
  inst.responses = simulate_responses(inst.population, inst.profiles, grid.learner.params,
                                      grid.attribute, rng);
  inst.learner = grid.learner;
  inst.learner.seed = rng();
  return inst;
}

namespace {

struct RepetitionOutcome {
  LearnRun random_run;
  double uniform_reduction = 0.0;
  std::size_t flagged = 0;
  std::size_t profiles = 0;
};

RepetitionOutcome run_repetition(const ExperimentGrid& grid, std::size_t participants,
                                 std::size_t tuples, std::uint64_t seed) {
  auto inst = make_instance(grid, participants, tuples, seed);
  RepetitionOutcome out;
  out.random_run = saff_learn(inst.profiles, inst.responses, inst.learner);
  if (grid.compare_uniform_init) {
    auto uniform_cfg = inst.learner;
    uniform_cfg.init_mode = InitMode::uniform;
    out.uniform_reduction =
        regret_reduction(saff_learn(inst.profiles, inst.responses, uniform_cfg));
  }
  for (const auto& p : inst.profiles) out.flagged += p.flag_count();
  out.profiles = inst.profiles.size();
  return out;
}

}  // namespace

GridResult run_grid(const ExperimentGrid& grid) {
  grid.validate();
  struct Job {
    std::size_t cell, participants, tuples;
  };
  std::vector<Job> jobs;
  for (auto n : grid.participant_counts)
    for (auto m : grid.tuple_counts) jobs.push_back({jobs.size(), n, m});

  const std::size_t total = jobs.size() * grid.repetitions;
  std::vector<RepetitionOutcome> outcomes(total);
  unsigned workers = grid.threads ? grid.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));

  // Outcomes land in fixed slots; the reduction below runs in slot order so
  // results do not depend on the worker count.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const auto& job = jobs[idx / grid.repetitions];
      const std::size_t rep = idx % grid.repetitions;
      outcomes[idx] = run_repetition(grid, job.participants, job.tuples,
                                     repetition_seed(grid, job.cell, rep));
    }
  };
  std::vector<std::future<void>> pending;
  for (unsigned w = 1; w < workers; ++w) pending.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pending) f.get();

  GridResult result;
  const auto epochs = static_cast<std::size_t>(grid.learner.epochs);
  const auto reps = static_cast<double>(grid.repetitions);
  for (const auto& job : jobs) {
    CellResult cell;
    cell.participants = job.participants;
    cell.tuples = job.tuples;
    cell.mean_regret.assign(epochs, 0.0);
    cell.sd_regret.assign(epochs, 0.0);
    const auto first = job.cell * grid.repetitions;
    for (std::size_t r = 0; r < grid.repetitions; ++r) {
      const auto& o = outcomes[first + r];
      for (std::size_t e = 0; e < epochs; ++e) cell.mean_regret[e] += o.random_run.regret_trajectory[e];
      cell.mean_final_regret += o.random_run.final_regret;
      cell.mean_reduction_random += regret_reduction(o.random_run);
      cell.mean_reduction_uniform += o.uniform_reduction;
      cell.flagged_notions += o.flagged;
      cell.profiles_evaluated += o.profiles;
    }
    for (double& v : cell.mean_regret) v /= reps;
    cell.mean_final_regret /= reps;
    cell.mean_reduction_random /= reps;
    cell.mean_reduction_uniform /= reps;
    cell.mean_initial_regret = cell.mean_regret.front();
    for (std::size_t r = 0; r < grid.repetitions; ++r) {
      const auto& o = outcomes[first + r];
      for (std::size_t e = 0; e < epochs; ++e) {
        const double d = o.random_run.regret_trajectory[e] - cell.mean_regret[e];
        cell.sd_regret[e] += d * d;
      }
    }
    for (double& v : cell.sd_regret) v = std::sqrt(v / reps);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

}  // namespace saff
