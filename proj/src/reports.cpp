#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "saff/error.hpp"
#include "saff/io.hpp"

namespace saff {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json named_weights(const NotionVector& values) {
  ordered_json out = ordered_json::object();
  for (Notion n : kAllNotions)
    out[std::string(notion_name(n))] = values[static_cast<std::size_t>(n)];
  return out;
}

ordered_json profile_json(const FairnessProfile& p) {
  ordered_json flags = ordered_json::array();
  for (Notion n : kAllNotions)
    if (p.undefined[static_cast<std::size_t>(n)]) flags.push_back(std::string(notion_name(n)));
  return {{"values", named_weights(p.values)},
          {"undefined", flags},
          {"single_group", p.single_group}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) fail(ErrorCategory::io, "failed writing " + path.string());
}

ordered_json config_echo(const RunConfig& config) {
  return ordered_json::parse(config_to_json(config));
}

}  // namespace

AuditReport build_audit_report(const std::vector<DataTuple>& tuples, const RunConfig& config) {
  if (tuples.empty()) fail(ErrorCategory::validation, "audit needs at least one tuple");
  AuditReport report;
  for (Attribute attribute : config.attributes) {
    const auto group = config.group(attribute);
    AttributeAudit audit;
    audit.attribute = attribute;
    for (const auto& t : tuples) {
      validate_tuple(t);
      TupleAudit entry{t.tuple_id, fairness_profile(t, group)};
      for (std::size_t l = 0; l < kNumNotions; ++l) {
        audit.per_tuple_mean[l] += entry.profile.values[l];
        if (entry.profile.undefined[l]) ++audit.flag_counts[l];
      }
      if (entry.profile.single_group) {
        ++audit.single_group_tuples;
        report.warnings.push_back("tuple '" + t.tuple_id + "' has every recipient in one " +
                                  std::string(attribute_name(attribute)) +
                                  " group; all notions flagged");
      }
      audit.tuples.push_back(std::move(entry));
    }
    for (double& v : audit.per_tuple_mean) v /= static_cast<double>(tuples.size());
    audit.pooled = pooled_profile(tuples, group);
    report.attributes.push_back(std::move(audit));
  }
  return report;
}

InitDiagnostic compare_initializations(std::span<const FairnessProfile> profiles,
                                       const ResponseSet& responses,
                                       const LearnerConfig& learner) {
  auto random_cfg = learner;
  random_cfg.init_mode = InitMode::random;
  auto uniform_cfg = learner;
  uniform_cfg.init_mode = InitMode::uniform;
  InitDiagnostic d;
  d.reduction_random = regret_reduction(saff_learn(profiles, responses, random_cfg));
  d.reduction_uniform = regret_reduction(saff_learn(profiles, responses, uniform_cfg));
  d.ratio = d.reduction_random != 0.0 ? d.reduction_uniform / d.reduction_random : 0.0;
  return d;
}

PreferenceReport build_preference_report(const std::vector<DataTuple>& tuples,
                                         const ResponseBundle& responses,
                                         const std::vector<Attribute>& attributes,
                                         const RunConfig& config) {
  PreferenceReport report;
  report.dropped_participants = responses.dropped_participants;
  report.warnings = responses.warnings;
  const auto learner = config.learner();
  for (Attribute attribute : attributes) {
    const auto it = responses.sets.find(question_for(attribute));
    if (it == responses.sets.end())
      fail(ErrorCategory::validation, "responses contain no answers to the '" +
                                          std::string(attribute_name(attribute)) + "' question");
    const auto profiles = tuple_profiles(tuples, config.group(attribute));
    for (std::size_t m = 0; m < profiles.size(); ++m)
      if (profiles[m].flag_count() > 0)
        report.warnings.push_back("tuple '" + tuples[m].tuple_id + "' has " +
                                  std::to_string(profiles[m].flag_count()) +
                                  " undefined notion(s) for " +
                                  std::string(attribute_name(attribute)));
    AttributePreference pref;
    pref.attribute = attribute;
    pref.participants = it->second.participants();
    pref.tuples = it->second.tuples();
    pref.run = saff_learn(profiles, it->second, learner);
    pref.init_diagnostic = compare_initializations(profiles, it->second, learner);
    report.attributes.push_back(std::move(pref));
  }
  if (const auto overall = responses.sets.find(Question::overall);
      overall != responses.sets.end()) {
    const auto& set = overall->second;
    report.overall_mean_score.assign(set.tuples(), 0.0);
    for (std::size_t n = 0; n < set.participants(); ++n)
      for (std::size_t m = 0; m < set.tuples(); ++m)
        report.overall_mean_score[m] += set.score(n, m);
    for (double& v : report.overall_mean_score) v /= static_cast<double>(set.participants());
  }
  return report;
}

void write_audit_report(const std::filesystem::path& path, const AuditReport& report,
                        const RunConfig& config) {
  ordered_json attributes = ordered_json::array();
  for (const auto& a : report.attributes) {
    ordered_json tuples = ordered_json::array();
    for (const auto& t : a.tuples) {
      auto entry = profile_json(t.profile);
      entry["tuple_id"] = t.tuple_id;
      tuples.push_back(std::move(entry));
    }
    ordered_json flags = ordered_json::object();
    for (Notion n : kAllNotions)
      flags[std::string(notion_name(n))] = a.flag_counts[static_cast<std::size_t>(n)];
    attributes.push_back({{"attribute", std::string(attribute_name(a.attribute))},
                          {"pooled", profile_json(a.pooled)},
                          {"per_tuple_mean", named_weights(a.per_tuple_mean)},
                          {"flag_counts", flags},
                          {"single_group_tuples", a.single_group_tuples},
                          {"tuples", tuples}});
  }
  ordered_json doc = {{"report", "audit"},
                      {"attributes", attributes},
                      {"warnings", report.warnings},
                      {"config", config_echo(config)}};
  write_text(path, doc.dump(2) + "\n");
}

void write_preference_report(const std::filesystem::path& path,
                             const PreferenceReport& report, const RunConfig& config) {
  ordered_json attributes = ordered_json::array();
  for (const auto& a : report.attributes) {
    ordered_json betas = ordered_json::array();
    for (const auto& b : a.run.beta_trajectory) betas.push_back(named_weights(b.weights()));
    const auto& d = a.init_diagnostic;
    attributes.push_back(
        {{"attribute", std::string(attribute_name(a.attribute))},
         {"participants", a.participants},
         {"tuples", a.tuples},
         {"init_mode", std::string(init_mode_name(a.run.init_mode))},
         {"beta", named_weights(a.run.final_beta.weights())},
         {"preferred_notion", std::string(notion_name(a.run.final_beta.argmax()))},
         {"final_regret", a.run.final_regret},
         {"regret_trajectory", a.run.regret_trajectory},
         {"beta_trajectory", betas},
         {"init_diagnostic",
          {{"reduction_random_init", d.reduction_random},
           {"reduction_uniform_init", d.reduction_uniform},
           {"uniform_to_random_ratio", d.ratio}}}});
  }
  ordered_json doc = {{"report", "preference"},
                      {"attributes", attributes},
                      {"overall_mean_score", report.overall_mean_score},
                      {"dropped_participants", report.dropped_participants},
                      {"warnings", report.warnings},
                      {"config", config_echo(config)}};
  write_text(path, doc.dump(2) + "\n");
}

void write_regret_trajectories(const std::filesystem::path& path,
                               const PreferenceReport& report) {
  std::ostringstream out;
  out << "epoch";
  for (const auto& a : report.attributes) out << ',' << attribute_name(a.attribute);
  out << '\n';
  const std::size_t epochs =
      report.attributes.empty() ? 0 : report.attributes.front().run.regret_trajectory.size();
  for (std::size_t e = 0; e < epochs; ++e) {
    out << e;
    for (const auto& a : report.attributes) out << ',' << format_double(a.run.regret_trajectory[e]);
    out << '\n';
  }
  write_text(path, out.str());
}

void write_beta_table(const std::filesystem::path& path, const PreferenceReport& report) {
  std::ostringstream out;
  out << "attribute";
  for (Notion n : kAllNotions) out << ',' << notion_name(n);
  out << '\n';
  for (const auto& a : report.attributes) {
    out << attribute_name(a.attribute);
    for (double w : a.run.final_beta.weights()) out << ',' << format_double(w);
    out << '\n';
  }
  write_text(path, out.str());
}

std::map<Attribute, NotionVector> read_beta_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  std::map<Attribute, NotionVector> table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 || line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ',');
    const auto attribute = parse_attribute(cell);
    if (!attribute)
      fail(ErrorCategory::validation,
           path.string() + ":" + std::to_string(number) + ": unknown attribute '" + cell + "'");
    NotionVector w{};
    for (double& x : w) {
      if (!std::getline(fields, cell, ','))
        fail(ErrorCategory::validation, path.string() + ":" + std::to_string(number) +
                                            ": expected six weights");
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty())
        fail(ErrorCategory::validation, path.string() + ":" + std::to_string(number) +
                                            ": weight '" + cell + "' is not a number");
    }
    table[*attribute] = w;
  }
  return table;
}

void write_regret_curves(const std::filesystem::path& path, const GridResult& result) {
  std::ostringstream out;
  out << "epoch";
  for (const auto& c : result.cells) {
    const auto tag = "N" + std::to_string(c.participants) + "_M" + std::to_string(c.tuples);
    out << ',' << tag << "_mean," << tag << "_sd";
  }
  out << '\n';
  const std::size_t epochs = result.cells.empty() ? 0 : result.cells.front().mean_regret.size();
  for (std::size_t e = 0; e < epochs; ++e) {
    out << e;
    for (const auto& c : result.cells)
      out << ',' << format_double(c.mean_regret[e]) << ',' << format_double(c.sd_regret[e]);
    out << '\n';
  }
  write_text(path, out.str());
}

void write_simulation_report(const std::filesystem::path& path, const GridResult& result,
                             Attribute attribute, const RunConfig& config) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : result.cells) {
    const double ratio =
        c.mean_reduction_random != 0.0 ? c.mean_reduction_uniform / c.mean_reduction_random : 0.0;
    const double flagged_share =
        c.profiles_evaluated
            ? static_cast<double>(c.flagged_notions) /
                  static_cast<double>(c.profiles_evaluated * kNumNotions)
            : 0.0;
    cells.push_back({{"participants", c.participants},
                     {"tuples", c.tuples},
                     {"mean_initial_regret", c.mean_initial_regret},
                     {"mean_final_regret", c.mean_final_regret},
                     {"converged", c.mean_final_regret < c.mean_initial_regret},
                     {"init_diagnostic",
                      {{"reduction_random_init", c.mean_reduction_random},
                       {"reduction_uniform_init", c.mean_reduction_uniform},
                       {"uniform_to_random_ratio", ratio}}},
                     {"flagged_notion_share", flagged_share},
                     {"mean_regret", c.mean_regret},
                     {"sd_regret", c.sd_regret}});
  }
  ordered_json doc = {{"report", "simulation"},
                      {"attribute", std::string(attribute_name(attribute))},
                      {"cells", cells},
                      {"config", config_echo(config)}};
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace saff
