#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace ijack;
using namespace ijack::testing;

namespace {

struct Expected {
  const char* name;
  Fixture (*make)();
  double var;
  std::vector<double> EJ;
  std::vector<double> EK;
};

// Exact rational values, frozen from a brute-force enumeration before the
// engine existed.
const Expected kExpected[] = {
    {"rad2_prod", rad2_prod, 1.0, {2, 2}, {0, 2}},
    {"rad2_sum", rad2_sum, 2.0, {2, 0}, {2, 0}},
    {"rad3_u2", rad3_u2, 3.0, {6, 6, 0}, {0, 6, 0}},
    {"mean4_rad", mean4_rad, 0.25, {0.25, 0, 0, 0}, {0.25, 0, 0, 0}},
    {"max3_u01", max3_u01, 7.0 / 64, {3.0 / 16, 3.0 / 16, 3.0 / 32}, {3.0 / 64, 3.0 / 32, 3.0 / 32}},
    {"mixed3", mixed3, 3017.0 / 50, {6131.0 / 100, 64.0 / 25, 93.0 / 50}, {1492.0 / 25, 7.0 / 10, 93.0 / 50}},
};

}  // namespace

TEST(Jackknife, FrozenFixtureValues) {
  for (const auto& e : kExpected) {
    SCOPED_TRACE(e.name);
    const Fixture f = e.make();
    const CondExpCache cache(f.table);
    const JackknifeSpectrum jack = jackknife_spectrum(cache);
    const double tol = 1e-12 * std::max(1.0, std::abs(e.var));
    EXPECT_NEAR(variance(f.table), e.var, tol);
    ASSERT_EQ(jack.EJ.size(), e.EJ.size());
    for (std::size_t k = 0; k < e.EJ.size(); ++k) {
      EXPECT_NEAR(jack.EJ[k], e.EJ[k], tol) << "EJ_" << k + 1;
      EXPECT_NEAR(jack.EK[k], e.EK[k], tol) << "EK_" << k + 1;
      EXPECT_NEAR(jackknife_J(cache, static_cast<int>(k) + 1), e.EJ[k], tol);
      EXPECT_NEAR(jackknife_K(cache, static_cast<int>(k) + 1), e.EK[k], tol);
    }
  }
}

TEST(Jackknife, OutOfRangeOrdersAreZero) {
  const CondExpCache cache(rad2_prod().table);
  const JackknifeSpectrum jack = jackknife_spectrum(cache);
  EXPECT_EQ(jack.J(0), 0.0);
  EXPECT_EQ(jack.J(3), 0.0);
  EXPECT_EQ(jack.K(3), 0.0);
  EXPECT_THROW(jackknife_J(cache, 0), std::out_of_range);
  EXPECT_THROW(jackknife_K(cache, 3), std::out_of_range);
}

TEST(Jackknife, FirstOrderIsSumOfConditionalVariances) {
  const Fixture f = mixed3();
  const CondExpCache cache(f.table);
  double es = 0.0;
  for (int i = 0; i < 3; ++i) es += expectation(iterated_variance(cache, IndexSet{i}));
  EXPECT_NEAR(jackknife_J(cache, 1), es, 1e-10);
  EXPECT_NEAR(proof_R(cache, 1), variance(f.table), 1e-10);
}

TEST(Jackknife, ConstantStatisticVanishes) {
  const CondExpCache cache(constant_fixture(3, 1.5).table);
  const JackknifeSpectrum jack = jackknife_spectrum(cache);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(jack.J(k), 0.0);
    EXPECT_EQ(jack.K(k), 0.0);
    EXPECT_EQ(jack.R(k), 0.0);
  }
}

TEST(IteratedDifferences, MatchIteratedVariance) {
  const Fixture f = mixed3();
  const CondExpCache cache(f.table);
  for (IndexSet::Mask m = 1; m < 8; ++m) {
    const IndexSet I = IndexSet::from_mask(m);
    EXPECT_NEAR(iterated_difference_moment(f.table, I) / std::ldexp(1.0, I.size()),
                expectation(iterated_variance(cache, I)), 1e-9);
  }
  // (S - S_1)^2 for x1 x2: both signs flip w.p. 1/2 -> E = 4 * 1/2 = 2 = 2^1 * Var^(1)
  EXPECT_NEAR(iterated_difference_moment(rad2_prod().table, IndexSet{0}), 2.0, 1e-15);
  EXPECT_THROW(iterated_difference_moment(f.table, IndexSet{}), std::invalid_argument);
  EXPECT_THROW(iterated_difference_moment(f.table, IndexSet{0, 1, 2}, 100), std::length_error);
}

TEST(ClassicalJackknife, PairwiseForm) {
  const std::vector<double> v{1.0, 2.0, 4.0};
  // mean 7/3: squares 16/9 + 1/9 + 25/9 = 14/3; pairwise (1 + 9 + 4) / 3 = 14/3
  EXPECT_NEAR(classical_jackknife(v), 14.0 / 3, 1e-14);
  EXPECT_EQ(classical_jackknife(std::vector<double>{3.0, 3.0}), 0.0);
  EXPECT_EQ(classical_jackknife(std::vector<double>{0.1, 0.1, 0.1}), 0.0);
  EXPECT_THROW(classical_jackknife(std::vector<double>{1.0}), std::invalid_argument);
}
