#include "saff/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "saff/error.hpp"

namespace saff {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(std::string_view source, const std::string& what) {
  fail(ErrorCategory::config, std::string(source) + ": " + what);
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    std::string_view where, std::string_view source) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (auto k : allowed) known = known || k == key;
    if (!known) config_error(source, "unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& object, const char* key, T& target, std::string_view source) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(source, std::string("field '") + key + "': " + e.what());
  }
}

std::string read_name(const json& value, std::string_view source, std::string_view field) {
  if (!value.is_string()) config_error(source, std::string(field) + " must be a string");
  return value.get<std::string>();
}

void read_offsets(const json& object, std::array<GroupOffsets, 3>& table,
                  std::string_view where, std::string_view source) {
  reject_unknown(object, {"age", "gender", "race"}, where, source);
  for (Attribute a : kAllAttributes) {
    const auto key = std::string(attribute_name(a));
    if (!object.contains(key)) continue;
    const auto& entry = object.at(key);
    reject_unknown(entry, {"privileged", "underprivileged"}, key, source);
    auto& o = table[static_cast<std::size_t>(a)];
    read(entry, "privileged", o.privileged, source);
    read(entry, "underprivileged", o.underprivileged, source);
  }
}

json offsets_json(const std::array<GroupOffsets, 3>& table) {
  json out = json::object();
  for (Attribute a : kAllAttributes) {
    const auto& o = table[static_cast<std::size_t>(a)];
    out[std::string(attribute_name(a))] = {{"privileged", o.privileged},
                                           {"underprivileged", o.underprivileged}};
  }
  return out;
}

}  // namespace

std::vector<Attribute> parse_attribute_selection(std::string_view text) {
  if (text == "all") return {kAllAttributes.begin(), kAllAttributes.end()};
  if (auto a = parse_attribute(text)) return {*a};
  fail(ErrorCategory::invalid_argument,
       "unknown attribute '" + std::string(text) + "' (expected age, gender, race or all)");
}

void RunConfig::validate() const {
  params.validate();
  learner().validate();
  if (!(threshold > 0.0 && threshold < 1.0))
    fail(ErrorCategory::config, "threshold must lie in (0,1)");
  if (attributes.empty()) fail(ErrorCategory::config, "no attribute selected");
  if (groups.age_cutoff < 17) fail(ErrorCategory::config, "age cutoff must be >= 17");
  if (groups.privileged_races.empty() || groups.privileged_races.size() > 1)
    fail(ErrorCategory::config, "exactly one privileged race category is required");
  if (groups.privileged_genders.empty() || groups.privileged_genders.size() > 1)
    fail(ErrorCategory::config, "exactly one privileged gender category is required");
  if (simulation.dataset_participants == 0 || simulation.dataset_tuples == 0)
    fail(ErrorCategory::config, "simulation dataset shape must be positive");
  grid(attributes.front()).validate();
}

LearnerConfig RunConfig::learner() const {
  LearnerConfig c;
  c.step_size = step_size;
  c.epochs = epochs;
  c.init_mode = init_mode;
  c.seed = seed;
  c.params = params;
  return c;
}

GroupSpec RunConfig::group(Attribute attribute) const {
  return GroupSpec::standard(attribute, groups, threshold);
}

ExperimentGrid RunConfig::grid(Attribute attribute) const {
  ExperimentGrid g;
  g.participant_counts = simulation.participant_counts;
  g.tuple_counts = simulation.tuple_counts;
  g.pairs_per_tuple = simulation.pairs_per_tuple;
  g.repetitions = simulation.repetitions;
  g.attribute = attribute;
  g.learner = learner();
  g.bias = simulation.bias;
  g.bias.groups = groups;
  g.bias.threshold = threshold;
  g.seed = seed;
  g.compare_uniform_init = simulation.compare_uniform_init;
  g.threads = simulation.threads;
  return g;
}

RunConfig parse_config(std::string_view json_text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(source, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error(source, "top level must be a JSON object");
  reject_unknown(doc,
                 {"sigma", "lambda", "step_size", "epochs", "seed", "threshold",
                  "attribute", "init_mode", "groups", "simulation"},
                 "config", source);

  RunConfig c;
  read(doc, "sigma", c.params.sigma, source);
  read(doc, "lambda", c.params.lambda, source);
  read(doc, "step_size", c.step_size, source);
  read(doc, "epochs", c.epochs, source);
  read(doc, "seed", c.seed, source);
  read(doc, "threshold", c.threshold, source);
  if (doc.contains("attribute")) {
    try {
      c.attributes = parse_attribute_selection(read_name(doc["attribute"], source, "attribute"));
    } catch (const Error& e) {
      config_error(source, e.what());
    }
  }
  if (doc.contains("init_mode")) {
    const auto mode = read_name(doc["init_mode"], source, "init_mode");
    if (mode == "random") c.init_mode = InitMode::random;
    else if (mode == "uniform") c.init_mode = InitMode::uniform;
    else config_error(source, "init_mode must be 'random' or 'uniform'");
  }
  if (doc.contains("groups")) {
    const auto& g = doc["groups"];
    reject_unknown(g, {"age_cutoff", "privileged_race", "privileged_gender"}, "groups", source);
    read(g, "age_cutoff", c.groups.age_cutoff, source);
    if (g.contains("privileged_race")) {
      auto race = parse_race(read_name(g["privileged_race"], source, "privileged_race"));
      if (!race) config_error(source, "privileged_race must be 'Black' or 'Other'");
      c.groups.privileged_races = {*race};
    }
    if (g.contains("privileged_gender")) {
      auto gender = parse_gender(read_name(g["privileged_gender"], source, "privileged_gender"));
      if (!gender) config_error(source, "privileged_gender must be 'Male' or 'Female'");
      c.groups.privileged_genders = {*gender};
    }
  }
  if (doc.contains("simulation")) {
    const auto& s = doc["simulation"];
    reject_unknown(s,
                   {"participant_counts", "tuple_counts", "pairs_per_tuple", "repetitions",
                    "compare_uniform_init", "threads", "dataset_participants",
                    "dataset_tuples", "bias"},
                   "simulation", source);
    auto& sim = c.simulation;
    read(s, "participant_counts", sim.participant_counts, source);
    read(s, "tuple_counts", sim.tuple_counts, source);
    read(s, "pairs_per_tuple", sim.pairs_per_tuple, source);
    read(s, "repetitions", sim.repetitions, source);
    read(s, "compare_uniform_init", sim.compare_uniform_init, source);
    read(s, "threads", sim.threads, source);
    read(s, "dataset_participants", sim.dataset_participants, source);
    read(s, "dataset_tuples", sim.dataset_tuples, source);
    if (s.contains("bias")) {
      const auto& b = s["bias"];
      reject_unknown(b, {"base_rate", "spread", "decision_noise", "offsets", "noise_offsets"},
                     "bias", source);
      read(b, "base_rate", sim.bias.base_rate, source);
      read(b, "spread", sim.bias.spread, source);
      read(b, "decision_noise", sim.bias.decision_noise, source);
      if (b.contains("offsets")) read_offsets(b["offsets"], sim.bias.offsets, "offsets", source);
      if (b.contains("noise_offsets"))
        read_offsets(b["noise_offsets"], sim.bias.noise_offsets, "noise_offsets", source);
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    config_error(source, e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string config_to_json(const RunConfig& c) {
  json attrs;
  if (c.attributes.size() == kAllAttributes.size()) {
    attrs = "all";
  } else {
    attrs = std::string(attribute_name(c.attributes.front()));
  }
  const auto& sim = c.simulation;
  json doc = {
      {"sigma", c.params.sigma},
      {"lambda", c.params.lambda},
      {"step_size", c.step_size},
      {"epochs", c.epochs},
      {"seed", c.seed},
      {"threshold", c.threshold},
      {"attribute", attrs},
      {"init_mode", std::string(init_mode_name(c.init_mode))},
      {"groups",
       {{"age_cutoff", c.groups.age_cutoff},
        {"privileged_race", std::string(race_name(c.groups.privileged_races.front()))},
        {"privileged_gender", std::string(gender_name(c.groups.privileged_genders.front()))}}},
      {"simulation",
       {{"participant_counts", sim.participant_counts},
        {"tuple_counts", sim.tuple_counts},
        {"pairs_per_tuple", sim.pairs_per_tuple},
        {"repetitions", sim.repetitions},
        {"compare_uniform_init", sim.compare_uniform_init},
        {"threads", sim.threads},
        {"dataset_participants", sim.dataset_participants},
        {"dataset_tuples", sim.dataset_tuples},
        {"bias",
         {{"base_rate", sim.bias.base_rate},
          {"spread", sim.bias.spread},
          {"decision_noise", sim.bias.decision_noise},
          {"offsets", offsets_json(sim.bias.offsets)},
          {"noise_offsets", offsets_json(sim.bias.noise_offsets)}}}}}};
  return doc.dump(2);
}

}  // namespace saff
