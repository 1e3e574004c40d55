#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "saff/config.hpp"
#include "saff/io.hpp"

namespace saff {

using WarningSink = std::function<void(const std::string&)>;

// Output file names inside the --out directory.
namespace output_files {
inline constexpr const char* audit_report = "audit_report.json";
inline constexpr const char* preference_report = "preference_report.json";
inline constexpr const char* regret_trajectory = "regret_trajectory.csv";
inline constexpr const char* beta_table = "beta_table.csv";
inline constexpr const char* tuples = "tuples.csv";
inline constexpr const char* responses = "responses.csv";
}  // namespace output_files

AuditReport run_audit(const std::vector<DataTuple>& tuples, const RunConfig& config,
                      const std::filesystem::path& out_dir, const WarningSink& warn = {});

PreferenceReport run_learn(const std::vector<DataTuple>& tuples,
                           const ResponseBundle& responses,
                           const std::vector<Attribute>& attributes, const RunConfig& config,
                           const std::filesystem::path& out_dir, const WarningSink& warn = {});

struct SyntheticDataset {
  Population population;
  std::vector<DataTuple> tuples;
  std::vector<ResponseSet> responses;  // overall, age, gender, race
};

// Overall (Q1) scores are drawn from the per-notion mean of the three
// attribute profiles; they are descriptive only.
SyntheticDataset make_synthetic_dataset(const RunConfig& config);

// Writes tuples.csv, responses.csv and, per selected attribute,
// regret_curves_<attr>.csv and simulation_report_<attr>.json.
std::vector<GridResult> run_simulate(const RunConfig& config,
                                     const std::filesystem::path& out_dir);

struct GradcheckResult {
  std::size_t instances = 0;
  double max_relative_error = 0.0;
  double mean_relative_error = 0.0;
};

// Random instances (N <= 10, M <= 5, K = 10, beta on the simplex,
// sigma in [0.3, 2], lambda in [1, 20]); compares the analytic gradient with
// a five-point central difference along the simplex tangent directions.
GradcheckResult run_gradcheck(std::size_t instances, std::uint64_t seed);

// Relative error between analytic and finite-difference directional
// derivatives of the regret along e_j - 1/6, j = 1..6. Both vanishing below
// 1e-9 (e.g. every profile constant across notions) counts as agreement.
double gradient_relative_error(const ResponseSet& responses,
                               std::span<const FairnessProfile> profiles,
                               const NotionVector& beta, const FeedbackParams& params);

}  // namespace saff
