#include "saff/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <system_error>

#include "saff/error.hpp"

namespace saff {

namespace {

void prepare_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    fail(ErrorCategory::io, "cannot create output directory " + dir.string());
}

void emit(const WarningSink& warn, const std::vector<std::string>& warnings) {
  if (!warn) return;
  for (const auto& w : warnings) warn(w);
}

}  // namespace

AuditReport run_audit(const std::vector<DataTuple>& tuples, const RunConfig& config,
                      const std::filesystem::path& out_dir, const WarningSink& warn) {
  config.validate();
  auto report = build_audit_report(tuples, config);
  emit(warn, report.warnings);
  prepare_directory(out_dir);
  write_audit_report(out_dir / output_files::audit_report, report, config);
  return report;
}

PreferenceReport run_learn(const std::vector<DataTuple>& tuples,
                           const ResponseBundle& responses,
                           const std::vector<Attribute>& attributes, const RunConfig& config,
                           const std::filesystem::path& out_dir, const WarningSink& warn) {
  config.validate();
  auto effective = config;
  effective.attributes = attributes;
  auto report = build_preference_report(tuples, responses, attributes, effective);
  emit(warn, report.warnings);
  prepare_directory(out_dir);
  write_preference_report(out_dir / output_files::preference_report, report, effective);
  write_regret_trajectories(out_dir / output_files::regret_trajectory, report);
  write_beta_table(out_dir / output_files::beta_table, report);
  return report;
}

SyntheticDataset make_synthetic_dataset(const RunConfig& config) {
  config.validate();
  const auto grid = config.grid(Attribute::age);
  Rng rng(config.seed);
  SyntheticDataset data;
  data.population = sample_population(config.simulation.dataset_participants, rng);
  data.tuples = generate_tuples(config.simulation.dataset_tuples, grid.pairs_per_tuple,
                                grid.bias, rng);

  std::vector<FairnessProfile> overall(data.tuples.size());
  std::vector<std::vector<FairnessProfile>> per_attribute;
  for (Attribute a : kAllAttributes) {
    per_attribute.push_back(tuple_profiles(data.tuples, config.group(a)));
    for (std::size_t m = 0; m < data.tuples.size(); ++m)
      for (std::size_t l = 0; l < kNumNotions; ++l)
        overall[m].values[l] += per_attribute.back()[m].values[l] / 3.0;
  }
  auto overall_set = simulate_responses(data.population, overall, config.params,
                                        Attribute::age, rng);
  data.responses.emplace_back(Question::overall, overall_set.participants(),
                              overall_set.tuples(),
                              std::vector<std::uint8_t>(overall_set.scores().begin(),
                                                        overall_set.scores().end()));
  for (std::size_t a = 0; a < kAllAttributes.size(); ++a)
    data.responses.push_back(simulate_responses(data.population, per_attribute[a],
                                                config.params, kAllAttributes[a], rng));
  return data;
}

std::vector<GridResult> run_simulate(const RunConfig& config,
                                     const std::filesystem::path& out_dir) {
  config.validate();
  prepare_directory(out_dir);
  const auto data = make_synthetic_dataset(config);
  write_tuples_csv(out_dir / output_files::tuples, data.tuples);
  write_responses_csv(out_dir / output_files::responses, data.tuples, data.responses);

  std::vector<GridResult> results;
  for (Attribute a : config.attributes) {
    auto result = run_grid(config.grid(a));
    const auto name = std::string(attribute_name(a));
    write_regret_curves(out_dir / ("regret_curves_" + name + ".csv"), result);
    write_simulation_report(out_dir / ("simulation_report_" + name + ".json"), result, a,
                            config);
    results.push_back(std::move(result));
  }
  return results;
}

double gradient_relative_error(const ResponseSet& responses,
                               std::span<const FairnessProfile> profiles,
                               const NotionVector& beta, const FeedbackParams& params) {
  const auto grad = regret_gradient(responses, profiles, beta, params);
  double grad_mean = 0.0;
  for (double g : grad) grad_mean += g / static_cast<double>(kNumNotions);

  constexpr double h = 1e-4;
  const auto regret_at = [&](std::size_t j, double t) {
    NotionVector b = beta;
    for (std::size_t l = 0; l < kNumNotions; ++l)
      b[l] += t * ((l == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(kNumNotions));
    return feedback_regret(responses, profiles, b, params);
  };
  double diff = 0.0, scale = 0.0, analytic_norm = 0.0;
  for (std::size_t j = 0; j < kNumNotions; ++j) {
    const double numeric = (-regret_at(j, 2 * h) + 8 * regret_at(j, h) - 8 * regret_at(j, -h) +
                            regret_at(j, -2 * h)) /
                           (12 * h);
    const double analytic = grad[j] - grad_mean;
    diff += (analytic - numeric) * (analytic - numeric);
    scale += numeric * numeric;
    analytic_norm += analytic * analytic;
  }
  // Below this the difference quotient only resolves rounding noise.
  constexpr double resolution = 1e-9;
  const double denom = std::sqrt(std::max(scale, analytic_norm));
  if (denom < resolution) return 0.0;
  return std::sqrt(diff) / denom;
}

GradcheckResult run_gradcheck(std::size_t instances, std::uint64_t seed) {
  if (instances == 0) fail(ErrorCategory::invalid_argument, "gradcheck needs instances >= 1");
  Rng rng(seed);
  BiasConfig bias;
  GradcheckResult result;
  result.instances = instances;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto participants = 1 + static_cast<std::size_t>(unit_uniform(rng) * 10.0);
    const auto n_tuples = 1 + static_cast<std::size_t>(unit_uniform(rng) * 5.0);
    FeedbackParams params;
    params.sigma = 0.3 + 1.7 * unit_uniform(rng);
    params.lambda = 1.0 + 19.0 * unit_uniform(rng);
    const auto attribute = kAllAttributes[static_cast<std::size_t>(unit_uniform(rng) * 3.0)];
    const auto beta = sample_preference(rng);
    const auto tuples = generate_tuples(n_tuples, kDefaultPairsPerTuple, bias, rng);
    const auto profiles = tuple_profiles(tuples, GroupSpec::standard(attribute));
    const auto population = sample_population(participants, rng);
    const auto responses = simulate_responses(population, profiles, params, attribute, rng);
    const double err = gradient_relative_error(responses, profiles, beta.weights(), params);
    result.max_relative_error = std::max(result.max_relative_error, err);
    result.mean_relative_error += err / static_cast<double>(instances);
  }
  return result;
}

}  // namespace saff
