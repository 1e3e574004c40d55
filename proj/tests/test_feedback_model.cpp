#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "saff/error.hpp"
#include "saff/feedback_model.hpp"

using namespace saff;

namespace {

FairnessProfile profile_of(const NotionVector& v) {
  FairnessProfile p;
  p.values = v;
  return p;
}

double sum(const ScoreVector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("aggregate evaluation") {
  NotionVector phi = {0.3, -0.1, 0.7, -0.4, 0.2, 0.4};
  for (Notion n : kAllNotions)
    CHECK(aggregate_evaluation(PreferenceWeight::one_hot(n), profile_of(phi)) ==
          phi[static_cast<std::size_t>(n)]);
  CHECK(aggregate_evaluation(PreferenceWeight::uniform(),
                             profile_of({0.6, -0.6, 0.3, -0.3, 0, 0})) ==
        doctest::Approx(0.0).epsilon(1e-15));
  auto half = PreferenceWeight::from({0.5, 0.5, 0, 0, 0, 0});
  CHECK(aggregate_evaluation(half, profile_of({0.4, -0.2, 0.9, 0.9, 0.9, 0.9})) ==
        doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("preference weight validation") {
  CHECK_THROWS_AS(PreferenceWeight::from({0.5, 0.6, 0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(PreferenceWeight::from({1.2, -0.2, 0, 0, 0, 0}), Error);
  CHECK_NOTHROW(PreferenceWeight::from({0.25, 0.25, 0.25, 0.25, 0, 0}));
  CHECK(PreferenceWeight::uniform().argmax() == Notion::statistical_parity);
  CHECK(PreferenceWeight::from({0, 0.4, 0, 0.4, 0.2, 0}).argmax() == Notion::calibration);
}

TEST_CASE("partition boundaries") {
  const auto& p = LikertPartition::standard();
  CHECK(p.raw_boundaries[0] == -1.0);
  CHECK(p.raw_boundaries[7] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.raw_boundaries[14] == 1.0);
  CHECK(p.logit_boundaries[7] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isinf(p.logit_boundaries[0]));
  CHECK(p.logit_boundaries[0] < 0);
  CHECK(std::isinf(p.logit_boundaries[14]));
  CHECK(p.logit_boundaries[14] > 0);
  for (int i = 1; i < 14; ++i) {
    CHECK(p.raw_boundaries[i] == doctest::Approx(-1.0 + i / 7.0).epsilon(1e-14));
    CHECK(p.logit_boundaries[i] == doctest::Approx(std::log(i / (14.0 - i))).epsilon(1e-14));
  }
}

TEST_CASE("normal cdf against high-precision references") {
  // Reference values computed with 40-digit arithmetic.
  const std::array<std::pair<double, double>, 20> ref = {{
      {-8, 6.220960574271784123516e-16},
      {-6, 9.865876450376981407009e-10},
      {-4, 0.00003167124183311992125377},
      {-3, 0.001349898031630094526652},
      {-2, 0.02275013194817920720028},
      {-1.5, 0.06680720126885806600449},
      {-1, 0.1586552539314570514148},
      {-0.5, 0.3085375387259868963623},
      {-0.25, 0.4012936743170762757591},
      {-0.1, 0.4601721627229710185346},
      {0, 0.5},
      {0.1, 0.5398278372770289814654},
      {0.25, 0.5987063256829237242409},
      {0.5, 0.6914624612740131036377},
      {1, 0.8413447460685429485852},
      {1.5, 0.9331927987311419339955},
      {2, 0.9772498680518207927997},
      {3, 0.9986501019683699054733},
      {4, 0.9999683287581668800787},
      {6, 0.9999999990134123549623},
  }};
  for (auto [x, want] : ref) CHECK(std::abs(standard_normal_cdf(x) - want) <= 1e-12);
  CHECK(standard_normal_cdf(-INFINITY) == 0.0);
  CHECK(standard_normal_cdf(INFINITY) == 1.0);
}

TEST_CASE("cell masses tile the line") {
  std::mt19937_64 g(21);
  for (int k = 0; k < 1000; ++k) {
    double psi = oracle::uniform(g, -1, 1), sigma = oracle::uniform(g, 0.05, 3);
    double s = 0;
    for (std::size_t i = 1; i <= kNumCells; ++i) {
      double v = interval_mass(i, psi, sigma);
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("cell masses are mirror images at psi = 0") {
  for (double sigma : {0.2, 1.0, 2.5})
    for (std::size_t i = 1; i <= kNumCells; ++i)
      CHECK(interval_mass(i, 0.0, sigma) ==
            doctest::Approx(interval_mass(15 - i, 0.0, sigma)).epsilon(1e-13));
}

TEST_CASE("central cell mass against numerical integration") {
  const double z6 = std::log(6.0 / 8.0);
  double integral = oracle::simpson([](double x) { return oracle::normal_density(x, 0, 1); },
                                    z6, 0.0);
  CHECK(std::abs(interval_mass(7, 0.0, 1.0) - integral) < 1e-12);
  CHECK(std::abs(interval_mass(7, 0.0, 1.0) - 0.1132049428659027706184) < 1e-13);

  // Off-centre cells, including a semi-infinite one truncated far out.
  const auto& z = LikertPartition::standard().logit_boundaries;
  for (std::size_t i : {3u, 9u, 12u}) {
    double psi = 0.37, sigma = 0.8;
    double want = oracle::simpson(
        [&](double x) { return oracle::normal_density(x, psi, sigma); }, z[i - 1], z[i]);
    CHECK(std::abs(interval_mass(i, psi, sigma) - want) < 1e-11);
  }
  double tail = oracle::simpson(
      [](double x) { return oracle::normal_density(x, 0.2, 0.5); }, z[13], 12.0);
  CHECK(std::abs(interval_mass(14, 0.2, 0.5) - tail) < 1e-11);
}

TEST_CASE("utility vector") {
  std::mt19937_64 g(22);
  for (int k = 0; k < 1000; ++k) {
    double psi = oracle::uniform(g, -1, 1), sigma = oracle::uniform(g, 0.05, 3);
    auto u = utility_vector(psi, sigma);
    auto w = utility_vector(-psi, sigma);
    CHECK(std::abs(sum(u.values) - 1.0) < 1e-9);
    for (std::size_t i = 0; i < kNumScores; ++i) {
      CHECK(std::abs(u.values[i] - w.values[i]) < 1e-12);
      CHECK(u.values[i] == doctest::Approx(interval_mass(i + 1, psi, sigma) +
                                           interval_mass(14 - i, psi, sigma))
                               .epsilon(1e-14));
    }
  }
  auto c = utility_vector(0.0, 1.0);
  for (std::size_t i = 0; i < 6; ++i) CHECK(c.values[6] > c.values[i]);
}

TEST_CASE("central utility peaks at psi = 0") {
  for (double sigma : {0.3, 1.0, 2.0}) {
    double at_zero = utility_vector(0.0, sigma).values[6];
    for (int k = -1000; k <= 1000; ++k) {
      if (k == 0) continue;
      CHECK(utility_vector(k / 1000.0, sigma).values[6] < at_zero);
    }
  }
}

TEST_CASE("feedback distribution") {
  std::mt19937_64 g(23);
  UtilityVector u;
  for (auto& x : u.values) x = oracle::uniform(g, 0, 1);

  auto flat = feedback_distribution(u, 0.0);
  for (double p : flat.probabilities) CHECK(p == doctest::Approx(1.0 / 7).epsilon(1e-15));

  UtilityVector even;
  even.values.fill(1.0 / 7);
  for (double lam : {0.5, 10.0, 1e4})
    for (double p : feedback_distribution(even, lam).probabilities)
      CHECK(p == doctest::Approx(1.0 / 7).epsilon(1e-15));

  UtilityVector peaked;
  peaked.values = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.4};
  auto sharp = feedback_distribution(peaked, 1000.0);
  CHECK(sharp.probabilities[6] > 1 - 1e-12);
  CHECK_FALSE(std::isnan(feedback_distribution(peaked, 1e6).probabilities[0]));

  for (int k = 0; k < 1000; ++k) {
    UtilityVector r;
    for (auto& x : r.values) x = oracle::uniform(g, 0, 1);
    double lam = oracle::uniform(g, 0, 50);
    auto s = feedback_distribution(r, lam);
    CHECK(std::abs(sum(s.probabilities) - 1.0) < 1e-12);
    // Permutation equivariance: reversing u reverses s.
    UtilityVector rev;
    std::reverse_copy(r.values.begin(), r.values.end(), rev.values.begin());
    auto t = feedback_distribution(rev, lam);
    for (std::size_t i = 0; i < kNumScores; ++i)
      CHECK(t.probabilities[6 - i] == doctest::Approx(s.probabilities[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(feedback_distribution(u, -1.0), Error);
}

TEST_CASE("sampling") {
  LikertDistribution three;
  three.probabilities[2] = 1.0;
  Rng rng(5);
  for (int k = 0; k < 200; ++k) CHECK(sample_score(three, rng) == 3);

  auto uni = LikertDistribution::uniform();
  std::array<int, 7> counts{};
  Rng r2(6);
  const int draws = 70000;
  for (int k = 0; k < draws; ++k) ++counts[sample_score(uni, r2) - 1];
  for (int c : counts) CHECK(std::abs(c / double(draws) - 1.0 / 7) < 0.01);

  Rng a(7), b(7);
  for (int k = 0; k < 100; ++k) CHECK(sample_score(uni, a) == sample_score(uni, b));
}

TEST_CASE("unit_uniform stays in [0,1)") {
  Rng rng(8);
  for (int k = 0; k < 10000; ++k) {
    double u = unit_uniform(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("parameter validation") {
  FeedbackParams p;
  CHECK_NOTHROW(p.validate());
  p.sigma = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.lambda = -1;
  CHECK_THROWS_AS(p.validate(), Error);
}
