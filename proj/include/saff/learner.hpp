#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saff/fairness_metrics.hpp"
#include "saff/feedback_model.hpp"

namespace saff {

// Survey questions: overall fairness, then one per sensitive attribute.
enum class Question { overall, age, gender, race };

std::string_view question_name(Question question) noexcept;
std::optional<Question> parse_question(std::string_view name) noexcept;
Question question_for(Attribute attribute) noexcept;
// nullopt for the overall question.
std::optional<Attribute> attribute_for(Question question) noexcept;

// Likert scores of N participants on M tuples for one survey question.
class ResponseSet {
 public:
  ResponseSet() = default;
  ResponseSet(Question question, std::size_t participants, std::size_t tuples,
              std::vector<std::uint8_t> scores);

  Question question() const { return question_; }
  std::size_t participants() const { return participants_; }
  std::size_t tuples() const { return tuples_; }
  int score(std::size_t participant, std::size_t tuple) const {
    return scores_[participant * tuples_ + tuple];
  }
  std::span<const std::uint8_t> scores() const { return scores_; }

  // Mean one-hot response per tuple.
  std::vector<ScoreVector> mean_responses() const;

 private:
  Question question_ = Question::overall;
  std::size_t participants_ = 0;
  std::size_t tuples_ = 0;
  std::vector<std::uint8_t> scores_;  // row-major, participant x tuple
};

enum class InitMode { random, uniform };

std::string_view init_mode_name(InitMode mode) noexcept;

struct LearnerConfig {
  double step_size = 0.1;
  int epochs = 20;
  InitMode init_mode = InitMode::random;
  std::uint64_t seed = 0;
  FeedbackParams params;

  void validate() const;
};

struct LearnRun {
  std::vector<PreferenceWeight> beta_trajectory;  // epochs + 1 entries
  std::vector<double> regret_trajectory;           // regret at beta^(e), e < epochs
  PreferenceWeight final_beta;
  double final_regret = 0.0;                       // regret at beta^(epochs)
  InitMode init_mode = InitMode::random;
};

using Matrix7 = std::array<std::array<double, kNumScores>, kNumScores>;

ScoreVector one_hot(int score);

std::vector<LikertDistribution> social_distributions(
    const NotionVector& beta, std::span<const FairnessProfile> profiles,
    const FeedbackParams& params);

// Mean squared distance between one-hot responses and the social
// distributions, averaged over participants then tuples.
double feedback_regret(const ResponseSet& responses,
                       std::span<const LikertDistribution> social);
double feedback_regret(const ResponseSet& responses,
                       std::span<const FairnessProfile> profiles,
                       const NotionVector& beta, const FeedbackParams& params);

// du/dpsi as a difference of Gaussian densities at the region boundaries.
ScoreVector utility_gradient(double psi, double sigma);

// The same derivative written out term by term with the erf and -psi*u
// contributions that cancel; kept to document the cancellation.
ScoreVector utility_gradient_expanded(double psi, double sigma);

// eta[i][k] = d s_i / d u_k = lambda * (diag(s) - s s^T).
Matrix7 softmax_jacobian(const UtilityVector& u, double lambda);

// Exact gradient of feedback_regret with respect to beta, chained per tuple.
NotionVector regret_gradient(const ResponseSet& responses,
                             std::span<const FairnessProfile> profiles,
                             const NotionVector& beta, const FeedbackParams& params);

// Euclidean projection onto the probability simplex of any dimension.
std::vector<double> project_to_simplex(std::span<const double> v);
PreferenceWeight project_simplex(const NotionVector& v);

PreferenceWeight initial_weight(InitMode mode, Rng& rng);

// Projected gradient descent with a fixed number of full-batch epochs.
LearnRun saff_learn(std::span<const FairnessProfile> profiles,
                    const ResponseSet& responses, const LearnerConfig& config);

// Relative drop (initial - final) / initial of the regret over a run.
double regret_reduction(const LearnRun& run);

}  // namespace saff
