#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nbci/estimators.hpp"
#include "nbci/rng.hpp"

using namespace nbci;

namespace {

Sample random_sample(RandomStream& rng, double mu, double theta, std::size_t n) {
  return sample(NBParams(mu, theta), n, rng);
}

}  // namespace

TEST(SampleMean, Basics) {
  EXPECT_DOUBLE_EQ(sample_mean(Sample({0, 0, 3})), 1.0);
  EXPECT_DOUBLE_EQ(sample_mean(Sample({5})), 5.0);
}

TEST(SampleMean, MonteCarlo) {
  RandomStream rng(1);
  const auto s = random_sample(rng, 2.0, 1.0, 100000);
  EXPECT_NEAR(sample_mean(s), 2.0, 5.0 * std::sqrt(6.0) / std::sqrt(1e5));
}

TEST(SampleVariance, Basics) {
  EXPECT_DOUBLE_EQ(sample_variance(Sample({0, 0, 3})), 3.0);
  EXPECT_DOUBLE_EQ(sample_variance(Sample({4, 4, 4})), 0.0);
  EXPECT_THROW(sample_variance(Sample({4})), std::invalid_argument);
}

TEST(SampleVariance, MonteCarlo) {
  RandomStream rng(2);
  const auto s = random_sample(rng, 5.0, 0.2, 100000);
  EXPECT_NEAR(sample_variance(s), 130.0, 13.0);
}

TEST(MomTheta, DirectFormula) {
  // mean 2, variance 4
  const Sample s({0, 2, 4, 2, 0, 4});
  ASSERT_DOUBLE_EQ(sample_mean(s), 2.0);
  ASSERT_NEAR(sample_variance(s), 3.2, 1e-15);
  EXPECT_NEAR(mom_theta(s), 2.0 / (3.2 / 2.0 - 1.0), 1e-12);
  const Sample t({0, 4, 2, 2});  // mean 2, var 8/3
  EXPECT_NEAR(mom_theta(t), 2.0 / ((8.0 / 3.0) / 2.0 - 1.0), 1e-12);
}

TEST(MomTheta, MeanTwoVarianceFourGivesTwo) {
  const Sample s({0, 4, 0, 4, 2});
  ASSERT_DOUBLE_EQ(sample_mean(s), 2.0);
  ASSERT_DOUBLE_EQ(sample_variance(s), 4.0);
  EXPECT_DOUBLE_EQ(mom_theta(s), 2.0);
}

TEST(MomTheta, UnderdispersedIsFloored) {
  // mean 3, variance 2
  const Sample s({2, 4, 2, 4, 3, 3, 1, 5, 3, 3});
  ASSERT_DOUBLE_EQ(sample_mean(s), 3.0);
  ASSERT_LT(sample_variance(s), 3.0);
  EXPECT_DOUBLE_EQ(mom_theta(s), 1e-5);
  EXPECT_DOUBLE_EQ(mom_theta(Sample({4, 4, 4})), 1e-5);
}

TEST(MomTheta, AllZeroIsDegenerate) {
  EXPECT_THROW(mom_theta(Sample({0, 0, 0})), DegenerateSampleError);
  EXPECT_THROW(mom_theta(Sample({3})), std::invalid_argument);
}

TEST(MomTheta, ConsistentUnderMonteCarlo) {
  RandomStream rng(3);
  const auto s = random_sample(rng, 5.0, 0.2, 100000);
  const double theta = mom_theta(s);
  EXPECT_GE(theta, 0.15);
  EXPECT_LE(theta, 0.25);
}

TEST(GrowthFactor, Values) {
  EXPECT_NEAR(growth_factor(30, 3), 10.0 / 9.0, 1e-15);
  EXPECT_DOUBLE_EQ(growth_factor(77, 0), 1.0);
  EXPECT_DOUBLE_EQ(growth_factor(100, 15), 100.0 / 85.0);
  EXPECT_THROW(growth_factor(10, 10), std::invalid_argument);
  EXPECT_THROW(growth_factor(10, -1), std::invalid_argument);
}

TEST(GrowthEstimate, Values) {
  EXPECT_DOUBLE_EQ(growth_estimate(Sample({0, 0, 3}), 1), 1.5);
  EXPECT_DOUBLE_EQ(growth_estimate(Sample({0, 0, 0, 0, 10, 10}), 2), 5.0);
  const Sample s({1, 7, 0, 2});
  EXPECT_EQ(growth_estimate(s, 0), sample_mean(s));
}

TEST(SeGba, Values) {
  const Sample s({0, 0, 3});
  EXPECT_DOUBLE_EQ(se_gba(s, 0), std::sqrt(3.0 / 3.0));
  EXPECT_DOUBLE_EQ(se_gba(s, 1), 1.5);
}

TEST(SeGbr, HandComputed) {
  EXPECT_EQ(se_gbr(Sample({3, 0, 0}), 1), 1.5);
  EXPECT_DOUBLE_EQ(se_gbr(Sample({3, 0, 0}), 0), 1.0);
  EXPECT_NEAR(se_gbr(Sample({0, 0, 0, 0, 10, 10}), 2), std::sqrt(100.0 / 12.0), 1e-15);
}

TEST(SeGbr, OrderOfValuesIsIrrelevant) {
  EXPECT_EQ(se_gbr(Sample({0, 10, 0, 0, 10, 0}), 2), se_gbr(Sample({10, 10, 0, 0, 0, 0}), 2));
}

TEST(SeGbr, Preconditions) {
  EXPECT_THROW(se_gbr(Sample({3, 1, 0}), 2), std::invalid_argument);
  EXPECT_THROW(se_gbr(Sample({3, 0, 0}), 2), std::invalid_argument);
}

TEST(SelectK, DefaultRule) {
  EXPECT_DOUBLE_EQ(select_k(0.3, 200), 15.0);
  EXPECT_DOUBLE_EQ(select_k(0.3, 40), 4.0);
  EXPECT_DOUBLE_EQ(select_k(0.8, 30), 3.0);
  EXPECT_DOUBLE_EQ(select_k(0.5, 300), 15.0);  // boundary on the high-dispersion branch
  EXPECT_DOUBLE_EQ(select_k(0.5000001, 300), 5.0);
  EXPECT_DOUBLE_EQ(select_k(0.3, 37), 3.7);
}

TEST(SelectK, MonotoneInThetaAndN) {
  for (std::size_t n = 5; n <= 1000; n += 5) {
    EXPECT_GE(select_k(0.5, n), select_k(0.51, n));
    EXPECT_LE(select_k(0.2, n), select_k(0.2, n + 5));
    EXPECT_LE(select_k(0.9, n), select_k(0.9, n + 5));
  }
}

TEST(RemovalCount, FloorsAndCaps) {
  const Sample s({0, 0, 5, 1, 2, 0, 3, 9, 1, 1});
  EXPECT_EQ(removal_count(s, 2.9), 2u);
  EXPECT_EQ(removal_count(s, 7.0), 3u);  // zero count
  EXPECT_EQ(removal_count(Sample({1, 2, 3}), 1.0), 0u);
  EXPECT_EQ(removal_count(Sample({0, 0, 0}), 3.0), 1u);  // n - 2
}

TEST(KPolicyType, ResolvesAndParses) {
  const Sample s(std::vector<Count>(100, 1));
  EXPECT_DOUBLE_EQ(KPolicy::misspecified().resolve(s), 15.0);
  EXPECT_DOUBLE_EQ(KPolicy::aggressive().resolve(s), 50.0);
  EXPECT_DOUBLE_EQ(KPolicy::fixed(2.5).resolve(s), 2.5);
  const Sample small(std::vector<Count>(30, 1));
  EXPECT_DOUBLE_EQ(KPolicy::misspecified().resolve(small), 6.0);
  EXPECT_DOUBLE_EQ(KPolicy::aggressive().resolve(small), 15.0);
  for (const char* text : {"default", "misspecified", "aggressive", "fixed:2.5", "fixed:0"}) {
    EXPECT_EQ(KPolicy::parse(text).to_string(), text);
  }
  EXPECT_THROW(KPolicy::parse("fixed:"), std::invalid_argument);
  EXPECT_THROW(KPolicy::parse("fixed:-1"), std::invalid_argument);
  EXPECT_THROW(KPolicy::parse("greedy"), std::invalid_argument);
  EXPECT_THROW(KPolicy::default_rule().resolve(Sample({0, 0, 0})), DegenerateSampleError);
}

// Identities over randomized samples.
TEST(EstimatorProperties, GrowthIdentities) {
  RandomStream rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 300);
    const double theta = 0.025 + 0.975 * rng.uniform();
    const auto s = random_sample(rng, 2.0 + 8.0 * rng.uniform(), theta, n);
    const double k = rng.uniform() * (static_cast<double>(n) / 2.0);

    EXPECT_EQ(growth_estimate(s, 0), sample_mean(s));
    EXPECT_EQ(se_gba(s, 0), std::sqrt(sample_variance(s) / static_cast<double>(n)));
    EXPECT_EQ(se_gbr(s, 0), std::sqrt(sample_variance(s) / static_cast<double>(n)));
    EXPECT_EQ(se_gba(s, k), growth_factor(n, k) * se_gba(s, 0));
    const double by_sum = static_cast<double>(s.sum()) / (static_cast<double>(n) - k);
    EXPECT_NEAR(growth_estimate(s, k), by_sum, 1e-12 * std::max(1.0, by_sum));
  }
}

TEST(EstimatorProperties, SampleMeanSkewAtExtremeDispersion) {
  RandomStream rng(808);
  const NBParams params(10.0, 0.025);
  int below = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) below += sample_mean(sample(params, 30, rng)) < 10.0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(below) / trials, 0.66, 0.02);
}
