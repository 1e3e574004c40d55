#include "saff/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "saff/error.hpp"

namespace saff {

std::string_view question_name(Question question) noexcept {
  switch (question) {
    case Question::overall: return "overall";
    case Question::age: return "age";
    case Question::gender: return "gender";
    case Question::race: return "race";
  }
  return "unknown";
}

std::optional<Question> parse_question(std::string_view name) noexcept {
  for (Question q : {Question::overall, Question::age, Question::gender, Question::race})
    if (question_name(q) == name) return q;
  return std::nullopt;
}

Question question_for(Attribute attribute) noexcept {
  switch (attribute) {
    case Attribute::age: return Question::age;
    case Attribute::gender: return Question::gender;
    case Attribute::race: return Question::race;
  }
  return Question::overall;
}

std::optional<Attribute> attribute_for(Question question) noexcept {
  switch (question) {
    case Question::age: return Attribute::age;
    case Question::gender: return Attribute::gender;
    case Question::race: return Attribute::race;
    case Question::overall: break;
  }
  return std::nullopt;
}

ResponseSet::ResponseSet(Question question, std::size_t participants,
                         std::size_t tuples, std::vector<std::uint8_t> scores)
    : question_(question),
      participants_(participants),
      tuples_(tuples),
      scores_(std::move(scores)) {
  if (participants_ == 0 || tuples_ == 0)
    fail(ErrorCategory::validation,
         "response set needs at least one participant and one tuple");
  if (scores_.size() != participants_ * tuples_)
    fail(ErrorCategory::dimension, "response score count does not equal N x M");
  for (auto s : scores_) {
    if (s < 1 || s > kNumScores)
      fail(ErrorCategory::validation,
           "response score " + std::to_string(int{s}) + " outside 1..7");
  }
}

std::vector<ScoreVector> ResponseSet::mean_responses() const {
  std::vector<ScoreVector> mean(tuples_, ScoreVector{});
  const double weight = 1.0 / static_cast<double>(participants_);
  for (std::size_t n = 0; n < participants_; ++n)
    for (std::size_t m = 0; m < tuples_; ++m)
      mean[m][static_cast<std::size_t>(score(n, m) - 1)] += weight;
  return mean;
}

std::string_view init_mode_name(InitMode mode) noexcept {
  return mode == InitMode::random ? "random" : "uniform";
}

void LearnerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size))
    fail(ErrorCategory::config, "step_size must be positive");
  if (epochs < 1) fail(ErrorCategory::config, "epochs must be at least 1");
  params.validate();
}

ScoreVector one_hot(int score) {
  if (score < 1 || score > static_cast<int>(kNumScores))
    fail(ErrorCategory::validation, "score " + std::to_string(score) + " outside 1..7");
  ScoreVector v{};
  v[static_cast<std::size_t>(score - 1)] = 1.0;
  return v;
}

std::vector<LikertDistribution> social_distributions(
    const NotionVector& beta, std::span<const FairnessProfile> profiles,
    const FeedbackParams& params) {
  std::vector<LikertDistribution> out;
  out.reserve(profiles.size());
  for (const auto& phi : profiles)
    out.push_back(predicted_distribution(beta, phi, params));
  return out;
}

double feedback_regret(const ResponseSet& responses,
                       std::span<const LikertDistribution> social) {
  if (social.size() != responses.tuples())
    fail(ErrorCategory::dimension,
         "expected " + std::to_string(responses.tuples()) +
             " social distributions, got " + std::to_string(social.size()));
  const auto mean = responses.mean_responses();
  double total = 0.0;
  for (std::size_t m = 0; m < social.size(); ++m) {
    // Mean over n of |e_s - p|^2 = 1 - 2 <mean_onehot, p> + |p|^2.
    const auto& p = social[m].probabilities;
    const double cross = std::inner_product(p.begin(), p.end(), mean[m].begin(), 0.0);
    const double norm = std::inner_product(p.begin(), p.end(), p.begin(), 0.0);
    total += 1.0 - 2.0 * cross + norm;
  }
  return total / static_cast<double>(social.size());
}

double feedback_regret(const ResponseSet& responses,
                       std::span<const FairnessProfile> profiles,
                       const NotionVector& beta, const FeedbackParams& params) {
  const auto social = social_distributions(beta, profiles, params);
  return feedback_regret(responses, social);
}

namespace {

double gaussian_kernel(double z, double psi, double sigma) {
  if (std::isinf(z)) return 0.0;
  const double t = (z - psi) / sigma;
  return std::exp(-0.5 * t * t);
}

double erf_term(double z, double psi, double sigma) {
  if (std::isinf(z)) return z > 0 ? 1.0 : -1.0;
  return std::erf((z - psi) / (sigma * std::numbers::sqrt2));
}

}  // namespace

ScoreVector utility_gradient(double psi, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCategory::invalid_argument, "sigma must be positive");
  const auto& z = LikertPartition::standard().logit_boundaries;
  const double scale = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  ScoreVector du{};
  for (std::size_t i = 1; i <= kNumScores; ++i) {
    // Mirrored boundaries paired so the result is exactly 0 at psi = 0.
    du[i - 1] = scale * ((gaussian_kernel(z[i - 1], psi, sigma) -
                          gaussian_kernel(z[kNumCells + 1 - i], psi, sigma)) +
                         (gaussian_kernel(z[kNumCells - i], psi, sigma) -
                          gaussian_kernel(z[i], psi, sigma)));
  }
  return du;
}

ScoreVector utility_gradient_expanded(double psi, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCategory::invalid_argument, "sigma must be positive");
  const auto& z = LikertPartition::standard().logit_boundaries;
  const auto u = utility_vector(psi, sigma);
  const double density = sigma / std::sqrt(2.0 * std::numbers::pi);
  ScoreVector du{};
  for (std::size_t i = 1; i <= kNumScores; ++i) {
    const std::size_t lo = i - 1, hi = i;
    const std::size_t mlo = kNumCells - i, mhi = kNumCells + 1 - i;
    const double bracket =
        density * gaussian_kernel(z[lo], psi, sigma) -
        density * gaussian_kernel(z[hi], psi, sigma) +
        0.5 * psi * erf_term(z[hi], psi, sigma) -
        0.5 * psi * erf_term(z[lo], psi, sigma) - psi * u.values[i - 1] +
        density * gaussian_kernel(z[mlo], psi, sigma) -
        density * gaussian_kernel(z[mhi], psi, sigma) +
        0.5 * psi * erf_term(z[mhi], psi, sigma) -
        0.5 * psi * erf_term(z[mlo], psi, sigma);
    du[i - 1] = bracket / (sigma * sigma);
  }
  return du;
}

Matrix7 softmax_jacobian(const UtilityVector& u, double lambda) {
  const auto s = feedback_distribution(u, lambda).probabilities;
  Matrix7 eta{};
  for (std::size_t i = 0; i < kNumScores; ++i) {
    for (std::size_t k = 0; k < kNumScores; ++k)
      eta[i][k] = -lambda * s[i] * s[k];
    // s_i (1 - s_i) written as s_i * sum_{j != i} s_j keeps rows summing to 0.
    double others = 0.0;
    for (std::size_t j = 0; j < kNumScores; ++j)
      if (j != i) others += s[j];
    eta[i][i] = lambda * s[i] * others;
  }
  return eta;
}

NotionVector regret_gradient(const ResponseSet& responses,
                             std::span<const FairnessProfile> profiles,
                             const NotionVector& beta, const FeedbackParams& params) {
  if (profiles.size() != responses.tuples())
    fail(ErrorCategory::dimension,
         "expected " + std::to_string(responses.tuples()) + " profiles, got " +
             std::to_string(profiles.size()));
  const auto mean = responses.mean_responses();
  const double scale = 2.0 / static_cast<double>(profiles.size());
  NotionVector grad{};
  for (std::size_t m = 0; m < profiles.size(); ++m) {
    const double psi = aggregate_evaluation(beta, profiles[m]);
    const auto u = utility_vector(psi, params.sigma);
    const auto s = feedback_distribution(u, params.lambda).probabilities;
    const auto eta = softmax_jacobian(u, params.lambda);
    const auto du = utility_gradient(psi, params.sigma);

    // dL/dpsi_m = (2/M) (s_m - mean_m)^T eta_m du_m
    double dpsi = 0.0;
    for (std::size_t i = 0; i < kNumScores; ++i) {
      double row = 0.0;
      for (std::size_t k = 0; k < kNumScores; ++k) row += eta[i][k] * du[k];
      dpsi += (s[i] - mean[m][i]) * row;
    }
    dpsi *= scale;
    for (std::size_t l = 0; l < kNumNotions; ++l) grad[l] += dpsi * profiles[m].values[l];
  }
  return grad;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  if (v.empty()) fail(ErrorCategory::invalid_argument, "cannot project an empty vector");
  for (double x : v)
    if (!std::isfinite(x))
      fail(ErrorCategory::validation, "simplex projection input is not finite");
  // Feasible up to rounding: keep the exact bits so fixed points stay fixed.
  if (on_simplex(v, 1e-14)) return {v.begin(), v.end()};

  std::vector<double> sorted(v.begin(), v.end());
  std::ranges::sort(sorted, std::greater<>{});
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::clamp(v[i] - tau, 0.0, 1.0);
  return out;
}

PreferenceWeight project_simplex(const NotionVector& v) {
  const auto projected = project_to_simplex(v);
  NotionVector w;
  std::ranges::copy(projected, w.begin());
  return PreferenceWeight::from(w);
}

PreferenceWeight initial_weight(InitMode mode, Rng& rng) {
  if (mode == InitMode::uniform) return PreferenceWeight::uniform();
  NotionVector w;
  double total = 0.0;
  do {
    total = 0.0;
    for (double& x : w) {
      x = unit_uniform(rng);
      total += x;
    }
  } while (total <= 0.0);
  for (double& x : w) x /= total;
  return project_simplex(w);
}

LearnRun saff_learn(std::span<const FairnessProfile> profiles,
                    const ResponseSet& responses, const LearnerConfig& config) {
  config.validate();
  if (profiles.empty() || responses.tuples() == 0 || responses.participants() == 0)
    fail(ErrorCategory::validation, "learning needs at least one tuple and participant");
  if (profiles.size() != responses.tuples())
    fail(ErrorCategory::dimension,
         "responses cover " + std::to_string(responses.tuples()) +
             " tuples but " + std::to_string(profiles.size()) + " profiles given");

  Rng rng(config.seed);
  LearnRun run;
  run.init_mode = config.init_mode;
  PreferenceWeight beta = initial_weight(config.init_mode, rng);
  run.beta_trajectory.reserve(static_cast<std::size_t>(config.epochs) + 1);
  run.regret_trajectory.reserve(static_cast<std::size_t>(config.epochs));
  run.beta_trajectory.push_back(beta);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    run.regret_trajectory.push_back(
        feedback_regret(responses, profiles, beta.weights(), config.params));
    const auto grad = regret_gradient(responses, profiles, beta.weights(), config.params);
    NotionVector step = beta.weights();
    for (std::size_t l = 0; l < kNumNotions; ++l) step[l] -= config.step_size * grad[l];
    beta = project_simplex(step);
    run.beta_trajectory.push_back(beta);
  }
  run.final_beta = beta;
  run.final_regret = feedback_regret(responses, profiles, beta.weights(), config.params);
  return run;
}

double regret_reduction(const LearnRun& run) {
  if (run.regret_trajectory.empty()) return 0.0;
  const double initial = run.regret_trajectory.front();
  if (initial <= 0.0) return 0.0;
  return (initial - run.final_regret) / initial;
}

}  // namespace saff
