#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "saff/fairness_metrics.hpp"

namespace saff {

inline constexpr std::size_t kNumScores = 7;
inline constexpr std::size_t kNumCells = 14;

using NotionVector = std::array<double, kNumNotions>;
using ScoreVector = std::array<double, kNumScores>;

// All randomness in the library flows through explicitly passed engines.
using Rng = std::mt19937_64;

// Uniform draw in [0,1) built from the top 53 bits of one engine output, so
// sequences are identical across standard library implementations.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// A point on the probability simplex over the six notions.
class PreferenceWeight {
 public:
  static constexpr double kSimplexTolerance = 1e-12;

  PreferenceWeight() : PreferenceWeight(uniform()) {}

  // Throws Error(validation) unless every entry is in [0,1] and the sum is 1
  // within kSimplexTolerance.
  static PreferenceWeight from(const NotionVector& weights);
  static PreferenceWeight uniform();
  static PreferenceWeight one_hot(Notion notion);

  const NotionVector& weights() const { return weights_; }
  double operator[](Notion notion) const {
    return weights_[static_cast<std::size_t>(notion)];
  }
  // Lowest index wins ties.
  Notion argmax() const;

 private:
  explicit PreferenceWeight(const NotionVector& w) : weights_(w) {}
  NotionVector weights_{};
};

bool on_simplex(std::span<const double> v, double tolerance = 1e-12);

struct FeedbackParams {
  double sigma = 1.0;
  double lambda = 10.0;

  void validate() const;
};

// Fourteen equal cells over [-1,1], boundaries mapped into logit space via
// t = (1 + b) / 2.
struct LikertPartition {
  double width = 1.0 / 7.0;
  std::array<double, kNumCells + 1> raw_boundaries{};
  std::array<double, kNumCells + 1> logit_boundaries{};

  static const LikertPartition& standard();
};

double aggregate_evaluation(const PreferenceWeight& beta, const FairnessProfile& phi);
// Unconstrained weights, used for directional derivatives off the simplex.
double aggregate_evaluation(const NotionVector& beta, const FairnessProfile& phi);

double standard_normal_cdf(double x);

// Mass of cell i (1..14) under N(psi, sigma^2) in logit space.
double interval_mass(std::size_t cell, double psi, double sigma);

struct UtilityVector {
  ScoreVector values{};  // indexed by score - 1
};

struct LikertDistribution {
  ScoreVector probabilities{};  // indexed by score - 1

  static LikertDistribution uniform();
};

// u_i = V_i + V_{15-i}: probability that the noisy evaluation lands in the
// symmetric region for score i. Score 7 is the central (fair) region.
UtilityVector utility_vector(double psi, double sigma);

LikertDistribution feedback_distribution(const UtilityVector& u, double lambda);

// Full forward model for one tuple.
LikertDistribution predicted_distribution(const NotionVector& beta,
                                          const FairnessProfile& phi,
                                          const FeedbackParams& params);

// Returns a score in 1..7.
int sample_score(const LikertDistribution& dist, Rng& rng);

}  // namespace saff
