#include "saff/fairness_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "saff/error.hpp"

namespace saff {

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::io: return "io";
    case ErrorCategory::config: return "config";
    case ErrorCategory::dimension: return "dimension";
    case ErrorCategory::numeric: return "numeric";
    case ErrorCategory::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, kNumNotions> kNotionNames = {
    "SP", "C", "AE", "EO", "PE", "OMR"};

}  // namespace

std::string_view notion_name(Notion notion) noexcept {
  return kNotionNames[static_cast<std::size_t>(notion)];
}

std::optional<Notion> parse_notion(std::string_view name) noexcept {
  for (std::size_t l = 0; l < kNumNotions; ++l) {
    if (kNotionNames[l] == name) return static_cast<Notion>(l);
  }
  return std::nullopt;
}

std::string_view attribute_name(Attribute attribute) noexcept {
  switch (attribute) {
    case Attribute::age: return "age";
    case Attribute::gender: return "gender";
    case Attribute::race: return "race";
  }
  return "unknown";
}

std::optional<Attribute> parse_attribute(std::string_view name) noexcept {
  for (Attribute a : kAllAttributes) {
    if (attribute_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view race_name(Race race) noexcept {
  return race == Race::black ? "Black" : "Other";
}

std::string_view gender_name(Gender gender) noexcept {
  return gender == Gender::male ? "Male" : "Female";
}

std::optional<Race> parse_race(std::string_view name) noexcept {
  if (name == "Black") return Race::black;
  if (name == "Other") return Race::other;
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view name) noexcept {
  if (name == "Male") return Gender::male;
  if (name == "Female") return Gender::female;
  return std::nullopt;
}

void validate_record(const MatchRecord& r, std::string_view context) {
  auto bad = [&](std::string_view field, const std::string& why) {
    fail(ErrorCategory::validation, std::string(context) + ": recipient '" +
                                        r.recipient_id + "' field " +
                                        std::string(field) + " " + why);
  };
  if (!(r.arp_probability >= 0.0 && r.arp_probability <= 1.0))
    bad("arp_probability", "must lie in [0,1]");
  if (r.surgeon_decision != 0 && r.surgeon_decision != 1)
    bad("surgeon_decision", "must be 0 or 1");
  if (r.recipient_age < 17) bad("recipient_age", "must be >= 17");
  if (!(r.epts >= 0.0 && r.epts <= 100.0)) bad("epts", "must lie in [0,100]");
  if (!(r.distance >= 0.0) || !std::isfinite(r.distance))
    bad("distance", "must be a non-negative finite number");
}

void validate_tuple(const DataTuple& tuple) {
  const std::string context = "tuple '" + tuple.tuple_id + "'";
  if (tuple.records.size() < 2)
    fail(ErrorCategory::validation,
         context + " has " + std::to_string(tuple.records.size()) +
             " records; at least 2 are required");
  if (!(tuple.donor.kdpi >= 0.0 && tuple.donor.kdpi <= 100.0))
    fail(ErrorCategory::validation, context + ": kdpi must lie in [0,100]");
  for (const auto& r : tuple.records) validate_record(r, context);
}

GroupSpec GroupSpec::standard(Attribute attribute, const GroupDefinitions& groups,
                              double threshold) {
  GroupSpec spec;
  spec.attribute = attribute;
  spec.threshold = threshold;
  switch (attribute) {
    case Attribute::age: {
      const int cutoff = groups.age_cutoff;
      spec.is_privileged = [cutoff](const MatchRecord& r) {
        return r.recipient_age <= cutoff;
      };
      break;
    }
    case Attribute::gender: {
      auto privileged = groups.privileged_genders;
      spec.is_privileged = [privileged](const MatchRecord& r) {
        return std::ranges::find(privileged, r.recipient_gender) !=
               privileged.end();
      };
      break;
    }
    case Attribute::race: {
      auto privileged = groups.privileged_races;
      spec.is_privileged = [privileged](const MatchRecord& r) {
        return std::ranges::find(privileged, r.recipient_race) !=
               privileged.end();
      };
      break;
    }
  }
  return spec;
}

GroupSpec GroupSpec::swapped() const {
  GroupSpec out = *this;
  out.is_privileged = [inner = is_privileged](const MatchRecord& r) {
    return !inner(r);
  };
  return out;
}

int discretize_prediction(double probability, double threshold) {
  if (!(probability >= 0.0 && probability <= 1.0))
    fail(ErrorCategory::validation,
         "prediction probability " + std::to_string(probability) +
             " outside [0,1]");
  if (!(threshold > 0.0 && threshold < 1.0))
    fail(ErrorCategory::invalid_argument, "threshold must lie in (0,1)");
  return probability >= threshold ? 1 : 0;
}

namespace {

struct Outcome {
  int truth;
  int predicted;
};

bool conditions_on(Notion notion, Outcome o) {
  switch (notion) {
    case Notion::statistical_parity:
    case Notion::accuracy_equality: return true;
    case Notion::calibration: return o.predicted == 1;
    case Notion::equal_opportunity:
    case Notion::overall_misclassification: return o.truth == 1;
    case Notion::predictive_equality: return o.truth == 0;
  }
  return false;
}

bool event_of(Notion notion, Outcome o) {
  switch (notion) {
    case Notion::statistical_parity:
    case Notion::equal_opportunity:
    case Notion::predictive_equality: return o.predicted == 1;
    case Notion::calibration: return o.truth == 1;
    case Notion::accuracy_equality: return o.predicted == o.truth;
    case Notion::overall_misclassification: return o.predicted == 0;
  }
  return false;
}

// Signed difference of two exact rates, rounded once.
double rate_difference(const Rate& a, const Rate& b) {
  const std::int64_t num = a.numerator * b.denominator - b.numerator * a.denominator;
  const std::int64_t den = a.denominator * b.denominator;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<Rate> groupwise_rate(
    std::span<const MatchRecord> records,
    const std::function<bool(const MatchRecord&)>& in_group, Notion notion,
    double threshold) {
  if (records.empty())
    fail(ErrorCategory::invalid_argument, "groupwise_rate requires records");
  Rate rate;
  for (const auto& r : records) {
    if (!in_group(r)) continue;
    if (r.surgeon_decision != 0 && r.surgeon_decision != 1)
      fail(ErrorCategory::validation,
           "recipient '" + r.recipient_id + "' has non-binary surgeon_decision");
    const Outcome o{r.surgeon_decision,
                    discretize_prediction(r.arp_probability, threshold)};
    if (!conditions_on(notion, o)) continue;
    ++rate.denominator;
    if (event_of(notion, o)) ++rate.numerator;
  }
  if (rate.denominator == 0) return std::nullopt;
  return rate;
}

std::size_t FairnessProfile::flag_count() const {
  return static_cast<std::size_t>(std::ranges::count(undefined, true));
}

FairnessProfile fairness_profile(std::span<const MatchRecord> records,
                                 const GroupSpec& group) {
  if (records.empty())
    fail(ErrorCategory::invalid_argument, "fairness_profile requires records");
  if (!group.is_privileged)
    fail(ErrorCategory::invalid_argument, "group predicate is empty");

  const auto privileged = group.is_privileged;
  const auto underprivileged = [&privileged](const MatchRecord& r) {
    return !privileged(r);
  };

  FairnessProfile profile;
  const auto n_privileged = std::ranges::count_if(records, privileged);
  profile.single_group = n_privileged == 0 ||
                         n_privileged == static_cast<std::ptrdiff_t>(records.size());

  for (Notion notion : kAllNotions) {
    const auto l = static_cast<std::size_t>(notion);
    const auto a = groupwise_rate(records, privileged, notion, group.threshold);
    const auto b = groupwise_rate(records, underprivileged, notion, group.threshold);
    if (a && b) {
      profile.values[l] = rate_difference(*a, *b);
    } else {
      profile.values[l] = 0.0;
      profile.undefined[l] = true;
    }
  }
  return profile;
}

FairnessProfile fairness_profile(const DataTuple& tuple, const GroupSpec& group) {
  return fairness_profile(std::span<const MatchRecord>(tuple.records), group);
}

FairnessProfile pooled_profile(std::span<const DataTuple> tuples,
                               const GroupSpec& group) {
  if (tuples.empty())
    fail(ErrorCategory::invalid_argument, "pooled_profile requires at least one tuple");
  std::vector<MatchRecord> all;
  for (const auto& t : tuples) all.insert(all.end(), t.records.begin(), t.records.end());
  return fairness_profile(std::span<const MatchRecord>(all), group);
}

}  // namespace saff
