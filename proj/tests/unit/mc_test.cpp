#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace ijack;
using namespace ijack::testing;

namespace {

McConfig config(std::uint64_t seed, std::size_t samples) {
  McConfig c;
  c.seed = seed;
  c.outer_samples = samples;
  return c;
}

void expect_within(const McEstimate& e, double exact, double sigmas = 4.0) {
  EXPECT_LE(std::abs(e.mean - exact), sigmas * e.std_error + 1e-12)
      << "estimate " << e.mean << " +- " << e.std_error << " vs " << exact;
}

}  // namespace

TEST(Sampling, PointMassAndDeterminism) {
  const ProductSpace point({DiscreteDistribution::point_mass(3.0), DiscreteDistribution::point_mass(-1.0)});
  SplitMix64 rng(1);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(sample_outcome(point, rng), (std::vector<std::size_t>{0, 0}));

  const ProductSpace space(rademachers(3));
  SplitMix64 a = SplitMix64::stream(42, 1, 0);
  SplitMix64 b = SplitMix64::stream(42, 1, 0);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(sample_outcome(space, a), sample_outcome(space, b));
}

TEST(Sampling, CoordinateMeans) {
  const ProductSpace space(rademachers(2));
  SplitMix64 rng = SplitMix64::stream(9, 0, 0);
  const int draws = 100000;
  double s0 = 0.0, s1 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const auto d = sample_outcome(space, rng);
    s0 += space.marginal(0).value(d[0]);
    s1 += space.marginal(1).value(d[1]);
  }
  const double sigma = 1.0 / std::sqrt(draws);
  EXPECT_LE(std::abs(s0 / draws), 4 * sigma);
  EXPECT_LE(std::abs(s1 / draws), 4 * sigma);
}

TEST(McConfig, Validation) {
  McConfig c;
  c.outer_samples = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.outer_samples = 2;
  c.inner_pairs = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EstimateEJ, Fixtures) {
  const Fixture prod = rad2_prod();
  expect_within(estimate_EJ(*prod.space, prod.statistic, 2, config(1, 20000)), 2.0);
  const Fixture u2 = rad3_u2();
  expect_within(estimate_EJ(*u2.space, u2.statistic, 1, config(2, 20000)), 6.0);
  McConfig sampled = config(3, 20000);
  sampled.subset_mode = SubsetMode::sample;
  expect_within(estimate_EJ(*u2.space, u2.statistic, 2, sampled), 6.0);
  const Fixture c = constant_fixture(3, 2.0);
  const McEstimate zero = estimate_EJ(*c.space, c.statistic, 2, config(4, 100));
  EXPECT_EQ(zero.mean, 0.0);
  EXPECT_EQ(zero.std_error, 0.0);
  EXPECT_THROW(estimate_EJ(*c.space, c.statistic, 4, config(4, 100)), std::out_of_range);
}

TEST(EstimateEK, Fixtures) {
  const Fixture prod = rad2_prod();
  expect_within(estimate_EK(*prod.space, prod.statistic, 1, config(5, 20000)), 0.0);
  const Fixture sum = rad2_sum();
  expect_within(estimate_EK(*sum.space, sum.statistic, 1, config(6, 20000)), 2.0);
  const Fixture u2 = rad3_u2();
  expect_within(estimate_EK(*u2.space, u2.statistic, 2, config(7, 20000)), 6.0);
  McConfig more = config(8, 5000);
  more.inner_pairs = 4;
  const Fixture mx = max3_u01();
  expect_within(estimate_EK(*mx.space, mx.statistic, 2, more), 3.0 / 32);
}

TEST(EstimateVariance, Mixed) {
  const Fixture f = mixed3();
  expect_within(estimate_variance(*f.space, f.statistic, config(10, 20000)), 3017.0 / 50);
}

TEST(EstimateDifferenceMoment, MatchesExact) {
  const Fixture f = mixed3();
  const IndexSet I{0, 2};
  expect_within(estimate_difference_moment(*f.space, f.statistic, I, config(11, 20000)),
                iterated_difference_moment(f.table, I));
}

TEST(EstimateBracket, Fixtures) {
  const Fixture prod = rad2_prod();
  const EstimatedBracket b = estimate_bracket(*prod.space, prod.statistic, 1, config(12, 20000));
  EXPECT_EQ(b.p, 1);
  expect_within(b.upper_J, 2.0);
  expect_within(b.lower_J, 1.0);
  const Fixture u2 = rad3_u2();
  expect_within(estimate_bracket(*u2.space, u2.statistic, 1, config(13, 20000)).upper_JK, 3.0);
  const Fixture c = constant_fixture(2, 1.0);
  const EstimatedBracket z = estimate_bracket(*c.space, c.statistic, 1, config(14, 100));
  EXPECT_EQ(z.lower_J.mean, 0.0);
  EXPECT_EQ(z.upper_J.mean, 0.0);
  EXPECT_THROW(estimate_bracket(*c.space, c.statistic, 2, config(14, 100)), std::out_of_range);
}

TEST(Determinism, SameSeedSameBits) {
  const Fixture f = mixed3();
  const McConfig c = config(42, 3000);
  EXPECT_EQ(estimate_EJ(*f.space, f.statistic, 2, c), estimate_EJ(*f.space, f.statistic, 2, c));
  EXPECT_EQ(estimate_EK(*f.space, f.statistic, 1, c), estimate_EK(*f.space, f.statistic, 1, c));
  EXPECT_NE(estimate_EJ(*f.space, f.statistic, 2, c).mean, estimate_EJ(*f.space, f.statistic, 2, config(43, 3000)).mean);
}

TEST(Determinism, ThreadCountDoesNotMatter) {
  const Fixture f = mixed3();
  McConfig one = config(42, 3001);
  McConfig four = one;
  four.threads = 4;
  EXPECT_EQ(estimate_EJ(*f.space, f.statistic, 2, one), estimate_EJ(*f.space, f.statistic, 2, four));
  EXPECT_EQ(estimate_EK(*f.space, f.statistic, 2, one), estimate_EK(*f.space, f.statistic, 2, four));
  EXPECT_EQ(estimate_variance(*f.space, f.statistic, one), estimate_variance(*f.space, f.statistic, four));
}

TEST(EstimateEK, NegativeFlag) {
  const Fixture prod = rad2_prod();
  bool saw_negative = false;
  for (std::uint64_t seed = 0; seed < 20 && !saw_negative; ++seed) {
    const McEstimate e = estimate_EK(*prod.space, prod.statistic, 1, config(seed, 50));
    EXPECT_EQ(e.negative, e.mean < 0.0);
    saw_negative = e.negative;
  }
  EXPECT_TRUE(saw_negative);
}

TEST(EfronSteinBias, MeanOfSigns) {
  const Fixture f = mean4_rad();
  // E J_1 - Var S = 1/4 - 1/4 = 0 for a linear statistic
  expect_within(mc_efron_stein_bias(*f.space, f.statistic, config(20, 20000)), 0.0);
  const Fixture mx = max3_u01();
  const McEstimate b = mc_efron_stein_bias(*mx.space, mx.statistic, config(21, 20000));
  EXPECT_GE(b.mean + 4 * b.std_error, 0.0);
  expect_within(b, 5.0 / 64);
  const Fixture c = make_fixture(rademachers(3), Statistic::constant(2.0));
  EXPECT_EQ(mc_efron_stein_bias(*c.space, c.statistic, config(22, 100)).mean, 0.0);
}

TEST(EfronSteinBias, Rejections) {
  const Fixture mixed = mixed3();
  EXPECT_THROW(mc_efron_stein_bias(*mixed.space, mixed.statistic, config(1, 100)), std::invalid_argument);
  const Fixture lopsided = make_fixture(rademachers(3), Statistic::sum({1.0, 2.0, 3.0}));
  EXPECT_THROW(mc_efron_stein_bias(*lopsided.space, lopsided.statistic, config(1, 100)), std::invalid_argument);
}
