#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace saff {

inline constexpr std::size_t kNumNotions = 6;

// Ordering is part of every external format: SP, C, AE, EO, PE, OMR.
enum class Notion : std::size_t {
  statistical_parity = 0,
  calibration = 1,
  accuracy_equality = 2,
  equal_opportunity = 3,
  predictive_equality = 4,
  overall_misclassification = 5,
};

inline constexpr std::array<Notion, kNumNotions> kAllNotions = {
    Notion::statistical_parity,  Notion::calibration,
    Notion::accuracy_equality,   Notion::equal_opportunity,
    Notion::predictive_equality, Notion::overall_misclassification};

std::string_view notion_name(Notion notion) noexcept;  // "SP", "C", ...
std::optional<Notion> parse_notion(std::string_view name) noexcept;

enum class Attribute { age, gender, race };

inline constexpr std::array<Attribute, 3> kAllAttributes = {
    Attribute::age, Attribute::gender, Attribute::race};

std::string_view attribute_name(Attribute attribute) noexcept;
std::optional<Attribute> parse_attribute(std::string_view name) noexcept;

enum class Race { black, other };
enum class Gender { male, female };

std::string_view race_name(Race race) noexcept;
std::string_view gender_name(Gender gender) noexcept;
std::optional<Race> parse_race(std::string_view name) noexcept;
std::optional<Gender> parse_gender(std::string_view name) noexcept;

struct MatchRecord {
  std::string recipient_id;
  int recipient_age = 18;
  Race recipient_race = Race::other;
  Gender recipient_gender = Gender::male;
  double epts = 0.0;
  double distance = 0.0;
  double arp_probability = 0.0;
  int surgeon_decision = 0;
};

struct DonorRecord {
  std::string donor_id;
  int donor_age = 0;
  Race donor_race = Race::other;
  Gender donor_gender = Gender::male;
  double kdpi = 0.0;
};

inline constexpr std::size_t kDefaultPairsPerTuple = 10;

struct DataTuple {
  std::string tuple_id;
  DonorRecord donor;
  std::vector<MatchRecord> records;
};

// Throws Error(validation) naming the tuple and record on the first violated
// invariant.
void validate_record(const MatchRecord& record, std::string_view context);
void validate_tuple(const DataTuple& tuple);

// Group membership knobs shared by the three standard attributes.
struct GroupDefinitions {
  int age_cutoff = 50;  // age <= cutoff is privileged
  std::vector<Race> privileged_races = {Race::other};
  std::vector<Gender> privileged_genders = {Gender::male};
};

struct GroupSpec {
  Attribute attribute = Attribute::age;
  std::function<bool(const MatchRecord&)> is_privileged;
  double threshold = 0.5;

  static GroupSpec standard(Attribute attribute,
                            const GroupDefinitions& groups = {},
                            double threshold = 0.5);

  // Exchanges the privileged and underprivileged groups.
  GroupSpec swapped() const;
};

int discretize_prediction(double probability, double threshold = 0.5);

// Exact empirical rate numerator / denominator.
struct Rate {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

// Empirical conditional frequency of the notion's event over the records for
// which `in_group` holds. Empty conditioning set yields nullopt.
std::optional<Rate> groupwise_rate(
    std::span<const MatchRecord> records,
    const std::function<bool(const MatchRecord&)>& in_group, Notion notion,
    double threshold = 0.5);

struct FairnessProfile {
  std::array<double, kNumNotions> values{};
  std::array<bool, kNumNotions> undefined{};
  // Every record fell into the same group.
  bool single_group = false;

  double operator[](Notion notion) const {
    return values[static_cast<std::size_t>(notion)];
  }
  std::size_t flag_count() const;
};

FairnessProfile fairness_profile(const DataTuple& tuple, const GroupSpec& group);
FairnessProfile fairness_profile(std::span<const MatchRecord> records,
                                 const GroupSpec& group);
FairnessProfile pooled_profile(std::span<const DataTuple> tuples,
                               const GroupSpec& group);

}  // namespace saff
