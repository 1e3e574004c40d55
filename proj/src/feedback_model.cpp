#include "saff/feedback_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "saff/error.hpp"

namespace saff {

PreferenceWeight PreferenceWeight::from(const NotionVector& weights) {
  if (!on_simplex(weights, kSimplexTolerance))
    fail(ErrorCategory::validation,
         "preference weight is not on the probability simplex");
  return PreferenceWeight(weights);
}

PreferenceWeight PreferenceWeight::uniform() {
  NotionVector w;
  w.fill(1.0 / static_cast<double>(kNumNotions));
  return PreferenceWeight(w);
}

PreferenceWeight PreferenceWeight::one_hot(Notion notion) {
  NotionVector w{};
  w[static_cast<std::size_t>(notion)] = 1.0;
  return PreferenceWeight(w);
}

Notion PreferenceWeight::argmax() const {
  return static_cast<Notion>(std::ranges::max_element(weights_) - weights_.begin());
}

bool on_simplex(std::span<const double> v, double tolerance) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

void FeedbackParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail(ErrorCategory::config, "sigma must be a positive finite number");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorCategory::config, "lambda must be a non-negative finite number");
}

const LikertPartition& LikertPartition::standard() {
  static const LikertPartition partition = [] {
    LikertPartition p;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= kNumCells; ++i) {
      const auto di = static_cast<double>(i);
      p.raw_boundaries[i] = -1.0 + di / 7.0;
      // Logit((1 + b_i) / 2) with (1 + b_i) / 2 = i / 14.
      p.logit_boundaries[i] =
          i == 0 ? -inf
                 : (i == kNumCells ? inf : std::log(di / (14.0 - di)));
    }
    p.raw_boundaries[7] = 0.0;
    p.logit_boundaries[7] = 0.0;
    // Exact mirror symmetry z_{14-i} = -z_i.
    for (std::size_t i = 8; i < kNumCells; ++i) {
      p.raw_boundaries[i] = -p.raw_boundaries[kNumCells - i];
      p.logit_boundaries[i] = -p.logit_boundaries[kNumCells - i];
    }
    return p;
  }();
  return partition;
}

double aggregate_evaluation(const NotionVector& beta, const FairnessProfile& phi) {
  return std::inner_product(beta.begin(), beta.end(), phi.values.begin(), 0.0);
}

double aggregate_evaluation(const PreferenceWeight& beta, const FairnessProfile& phi) {
  return aggregate_evaluation(beta.weights(), phi);
}

double standard_normal_cdf(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double interval_mass(std::size_t cell, double psi, double sigma) {
  if (cell < 1 || cell > kNumCells)
    fail(ErrorCategory::invalid_argument, "cell index must lie in 1..14");
  if (!(sigma > 0.0)) fail(ErrorCategory::invalid_argument, "sigma must be positive");
  const auto& z = LikertPartition::standard().logit_boundaries;
  const double upper = (z[cell] - psi) / sigma;
  const double lower = (z[cell - 1] - psi) / sigma;
  // Right of the mean, difference the upper tails to keep precision.
  if (lower > 0.0)
    return standard_normal_cdf(-lower) - standard_normal_cdf(-upper);
  return standard_normal_cdf(upper) - standard_normal_cdf(lower);
}

LikertDistribution LikertDistribution::uniform() {
  LikertDistribution d;
  d.probabilities.fill(1.0 / static_cast<double>(kNumScores));
  return d;
}

UtilityVector utility_vector(double psi, double sigma) {
  UtilityVector u;
  for (std::size_t i = 1; i <= kNumScores; ++i)
    u.values[i - 1] = interval_mass(i, psi, sigma) +
                      interval_mass(kNumCells + 1 - i, psi, sigma);
  return u;
}

LikertDistribution feedback_distribution(const UtilityVector& u, double lambda) {
  if (!(lambda >= 0.0))
    fail(ErrorCategory::invalid_argument, "lambda must be non-negative");
  const double peak = lambda * *std::ranges::max_element(u.values);
  LikertDistribution d;
  double total = 0.0;
  for (std::size_t i = 0; i < kNumScores; ++i) {
    d.probabilities[i] = std::exp(lambda * u.values[i] - peak);
    total += d.probabilities[i];
  }
  for (double& p : d.probabilities) p /= total;
  return d;
}

LikertDistribution predicted_distribution(const NotionVector& beta,
                                          const FairnessProfile& phi,
                                          const FeedbackParams& params) {
  return feedback_distribution(
      utility_vector(aggregate_evaluation(beta, phi), params.sigma), params.lambda);
}

int sample_score(const LikertDistribution& dist, Rng& rng) {
  const double draw = unit_uniform(rng);
  double cumulative = 0.0;
  int last_positive = 1;
  for (std::size_t i = 0; i < kNumScores; ++i) {
    if (dist.probabilities[i] <= 0.0) continue;
    last_positive = static_cast<int>(i) + 1;
    cumulative += dist.probabilities[i];
    if (draw < cumulative) return last_positive;
  }
  // Rounding left the cumulative sum just below the draw.
  return last_positive;
}

}  // namespace saff
