#pragma once

#include <memory>
#include <vector>

#include "ijack/ijack.hpp"

namespace ijack::testing {

// A named instance: a space, a statistic and its exact table.
struct Fixture {
  SpacePtr space;
  Statistic statistic;
  FieldTable table;
};

inline Fixture make_fixture(std::vector<DiscreteDistribution> dists, Statistic s) {
  SpacePtr space = build_space(std::move(dists));
  FieldTable t = tabulate(s, space);
  return {space, std::move(s), std::move(t)};
}

inline std::vector<DiscreteDistribution> rademachers(int n) {
  return std::vector<DiscreteDistribution>(static_cast<std::size_t>(n), DiscreteDistribution::rademacher());
}

// x1 * x2 on two Rademacher signs.
inline Fixture rad2_prod() { return make_fixture(rademachers(2), Statistic::poly({{1.0, {1, 1}}})); }

// x1 + x2 on two Rademacher signs.
inline Fixture rad2_sum() { return make_fixture(rademachers(2), Statistic::sum({1.0, 1.0})); }

// sum_{i<j} x_i x_j on three Rademacher signs.
inline Fixture rad3_u2() { return make_fixture(rademachers(3), Statistic::ustat2()); }

// Sample mean of four Rademacher signs.
inline Fixture mean4_rad() { return make_fixture(rademachers(4), Statistic::sum({0.25, 0.25, 0.25, 0.25})); }

// max of three fair bits.
inline Fixture max3_u01() {
  return make_fixture(std::vector<DiscreteDistribution>(3, DiscreteDistribution::uniform({0.0, 1.0})), Statistic::max());
}

// x1 x2 x3 + 2 x2^2 - x1 x3 + x1 over a sign, a skewed three-point law and a bit.
inline Fixture mixed3() {
  return make_fixture({DiscreteDistribution::rademacher(), DiscreteDistribution({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3}),
                       DiscreteDistribution::uniform({0.0, 1.0})},
                      Statistic::poly({{1.0, {1, 1, 1}}, {2.0, {0, 2, 0}}, {-1.0, {1, 0, 1}}, {1.0, {1, 0, 0}}}));
}

inline Fixture constant_fixture(int n, double c) {
  return make_fixture(std::vector<DiscreteDistribution>(static_cast<std::size_t>(n), DiscreteDistribution::uniform({0.0, 1.0, 2.0})),
                      Statistic::constant(c));
}

}  // namespace ijack::testing
