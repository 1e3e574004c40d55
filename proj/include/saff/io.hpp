#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saff/config.hpp"
#include "saff/fairness_metrics.hpp"
#include "saff/learner.hpp"
#include "saff/simulation.hpp"

namespace saff {

// ---- ingestion --------------------------------------------------------------

// One row per donor-recipient pair, header required, columns in any order.
inline constexpr std::array<std::string_view, 14> kTupleColumns = {
    "tuple_id",       "donor_id",        "donor_age",    "donor_race",
    "donor_gender",   "kdpi",            "recipient_id", "recipient_age",
    "recipient_race", "recipient_gender", "epts",         "distance",
    "arp_probability", "surgeon_decision"};

inline constexpr std::array<std::string_view, 4> kResponseColumns = {
    "participant_id", "tuple_id", "question", "score"};

// Errors name the source, line and field. Tuples keep first-appearance order
// and records keep row order within their tuple.
std::vector<DataTuple> parse_tuples(std::istream& in, std::string_view source);
std::vector<DataTuple> load_tuples(const std::filesystem::path& path);

struct ResponseBundle {
  std::map<Question, ResponseSet> sets;
  std::vector<std::string> participant_ids;  // retained, in first-appearance order
  std::vector<std::string> dropped_participants;
  std::vector<std::string> warnings;
};

// A participant is kept only when they scored every loaded tuple for every
// question that appears in the file.
ResponseBundle parse_responses(std::istream& in, std::string_view source,
                               const std::vector<DataTuple>& tuples);
ResponseBundle load_responses(const std::filesystem::path& path,
                              const std::vector<DataTuple>& tuples);

void write_tuples_csv(const std::filesystem::path& path, const std::vector<DataTuple>& tuples);

// Rows in participant-major order; ids follow the simulate naming scheme.
void write_responses_csv(const std::filesystem::path& path,
                         const std::vector<DataTuple>& tuples,
                         const std::vector<ResponseSet>& sets);

// ---- reports ----------------------------------------------------------------

struct TupleAudit {
  std::string tuple_id;
  FairnessProfile profile;
};

struct AttributeAudit {
  Attribute attribute = Attribute::age;
  std::vector<TupleAudit> tuples;
  FairnessProfile pooled;
  NotionVector per_tuple_mean{};  // mean over tuples of the per-tuple values
  std::array<std::size_t, kNumNotions> flag_counts{};
  std::size_t single_group_tuples = 0;
};

struct AuditReport {
  std::vector<AttributeAudit> attributes;
  std::vector<std::string> warnings;
};

AuditReport build_audit_report(const std::vector<DataTuple>& tuples, const RunConfig& config);

struct InitDiagnostic {
  double reduction_random = 0.0;   // (initial - final) / initial, random init
  double reduction_uniform = 0.0;  // same, uniform init
  // reduction_uniform / reduction_random; < 1 means uniform init made less progress.
  double ratio = 0.0;
};

struct AttributePreference {
  Attribute attribute = Attribute::age;
  std::size_t participants = 0;
  std::size_t tuples = 0;
  LearnRun run;
  InitDiagnostic init_diagnostic;
};

struct PreferenceReport {
  std::vector<AttributePreference> attributes;
  std::vector<std::string> dropped_participants;
  std::vector<std::string> warnings;
  // Mean overall (Q1) score per tuple, descriptive only.
  std::vector<double> overall_mean_score;
};

InitDiagnostic compare_initializations(std::span<const FairnessProfile> profiles,
                                       const ResponseSet& responses,
                                       const LearnerConfig& learner);

PreferenceReport build_preference_report(const std::vector<DataTuple>& tuples,
                                         const ResponseBundle& responses,
                                         const std::vector<Attribute>& attributes,
                                         const RunConfig& config);

// File writers. Output is byte-identical for identical inputs.
void write_audit_report(const std::filesystem::path& path, const AuditReport& report,
                        const RunConfig& config);
void write_preference_report(const std::filesystem::path& path,
                             const PreferenceReport& report, const RunConfig& config);
void write_regret_trajectories(const std::filesystem::path& path,
                               const PreferenceReport& report);
void write_beta_table(const std::filesystem::path& path, const PreferenceReport& report);
std::map<Attribute, NotionVector> read_beta_table(const std::filesystem::path& path);

void write_regret_curves(const std::filesystem::path& path, const GridResult& result);
void write_simulation_report(const std::filesystem::path& path, const GridResult& result,
                             Attribute attribute, const RunConfig& config);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace saff
