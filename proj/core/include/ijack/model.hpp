#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ijack/index_set.hpp"

namespace ijack {

/// Probabilities must sum to one within this tolerance before renormalization.
inline constexpr double kProbabilityTolerance = 1e-12;

/// Default cap on the number of joint outcomes a ProductSpace may have.
inline constexpr std::uint64_t kDefaultOutcomeCap = std::uint64_t{1} << 24;

/// Pass as the cap for spaces that are only ever sampled, never enumerated.
inline constexpr std::uint64_t kUnboundedOutcomes = 0;

/// A law with finite support: the distribution of one coordinate X_i.
class DiscreteDistribution {
 public:
  /// Throws std::invalid_argument on an empty support, mismatched lengths,
  /// non-finite values, negative probabilities, or a probability sum further
  /// than kProbabilityTolerance from one. Probabilities are renormalized once.
  DiscreteDistribution(std::vector<double> support, std::vector<double> probs);

  static DiscreteDistribution point_mass(double value);
  static DiscreteDistribution uniform(std::vector<double> support);
  /// +-1 with probability 1/2 each, support ordered (-1, +1).
  static DiscreteDistribution rademacher();

  std::size_t size() const { return support_.size(); }
  std::span<const double> support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  double value(std::size_t digit) const { return support_[digit]; }
  double prob(std::size_t digit) const { return probs_[digit]; }

  /// Inverse-CDF draw: the support digit selected by u in [0, 1).
  std::size_t digit_for(double u) const;

  double mean() const;
  double variance() const;

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// The product law mu_1 x ... x mu_n of independent discrete coordinates.
///
/// Joint outcomes are enumerated in mixed radix with coordinate 0 varying
/// fastest: outcome = sum_i digit_i * stride_i, stride_0 = 1,
/// stride_{i+1} = stride_i * |support_i|. Every table in the library uses this
/// layout.
class ProductSpace {
 public:
  /// Throws std::invalid_argument for n = 0 or n > 64, std::length_error when
  /// the joint outcome count exceeds `outcome_cap` (kUnboundedOutcomes lifts
  /// the cap; such a space can be sampled but not enumerated).
  explicit ProductSpace(std::vector<DiscreteDistribution> dists,
                        std::uint64_t outcome_cap = kDefaultOutcomeCap);

  int dimension() const { return static_cast<int>(dists_.size()); }
  const DiscreteDistribution& marginal(int i) const { return dists_[i]; }
  std::span<const DiscreteDistribution> marginals() const { return dists_; }

  /// False when the outcome count overflowed 64 bits (unbounded spaces only).
  bool enumerable() const { return enumerable_; }
  /// Number of joint outcomes. Meaningful only when enumerable().
  std::size_t outcome_count() const { return outcome_count_; }
  std::size_t radix(int i) const { return dists_[i].size(); }
  std::size_t stride(int i) const { return strides_[i]; }

  std::size_t digit(std::size_t outcome, int i) const { return (outcome / strides_[i]) % radix(i); }
  std::size_t with_digit(std::size_t outcome, int i, std::size_t d) const {
    return outcome - digit(outcome, i) * strides_[i] + d * strides_[i];
  }
  std::size_t encode(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decode(std::size_t outcome) const;
  double probability(std::size_t outcome) const;

  /// All coordinates share one law.
  bool is_iid() const;

 private:
  std::vector<DiscreteDistribution> dists_;
  std::vector<std::size_t> strides_;
  std::size_t outcome_count_ = 0;
  bool enumerable_ = true;
};

using SpacePtr = std::shared_ptr<const ProductSpace>;

SpacePtr build_space(std::vector<DiscreteDistribution> dists,
                     std::uint64_t outcome_cap = kDefaultOutcomeCap);

enum class StatisticKind { table, sum, max, ustat2, poly };

const char* to_string(StatisticKind kind);

struct Monomial {
  double coefficient = 0.0;
  /// One exponent per coordinate; missing trailing exponents count as zero.
  std::vector<int> exponents;
};

/// A real function S on the product space, from a small builtin catalog.
///
///   table   explicit value per joint outcome (enumeration order above)
///   sum     sum_i w_i x_i
///   max     max_i x_i
///   ustat2  sum_{i<j} g(x_i) g(x_j), g a value map over the supports
///           (identity when no map is given)
///   poly    sum_t c_t prod_i x_i^{e_ti}
class Statistic {
 public:
  static Statistic table(std::vector<double> values);
  static Statistic sum(std::vector<double> weights);
  static Statistic max();
  static Statistic ustat2(std::vector<std::pair<double, double>> value_map = {});
  static Statistic poly(std::vector<Monomial> terms);
  static Statistic constant(double c);

  StatisticKind kind() const { return kind_; }
  std::span<const double> table_values() const { return values_; }
  std::span<const double> weights() const { return values_; }
  std::span<const std::pair<double, double>> value_map() const { return value_map_; }
  std::span<const Monomial> terms() const { return terms_; }

  /// Throws std::invalid_argument when the statistic cannot be evaluated on
  /// every outcome of `space` (table of the wrong length, weight count not n,
  /// ustat2 map missing a support value, exponent list longer than n,
  /// negative exponent).
  void validate(const ProductSpace& space) const;

  /// S at the outcome given by per-coordinate support digits.
  double evaluate(const ProductSpace& space, std::span<const std::size_t> digits) const;

  friend bool operator==(const Statistic& a, const Statistic& b);

 private:
  double mapped(double x) const;

  StatisticKind kind_ = StatisticKind::poly;
  std::vector<double> values_;
  std::vector<std::pair<double, double>> value_map_;
  std::vector<Monomial> terms_;
};

/// One real value per joint outcome of a space: the common representation of
/// S, E^(I) S and Var^(I) S.
class FieldTable {
 public:
  /// Throws std::invalid_argument if values.size() != outcome_count.
  FieldTable(SpacePtr space, std::vector<double> values, IndexSet constant_coords = {});

  const ProductSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t outcome) const { return values_[outcome]; }
  /// Coordinates along which the table is known to be constant.
  IndexSet constant_coords() const { return constant_coords_; }

 private:
  SpacePtr space_;
  std::vector<double> values_;
  IndexSet constant_coords_;
};

FieldTable tabulate(const Statistic& statistic, SpacePtr space);
FieldTable constant_table(SpacePtr space, double value);

/// sum_w p(w) f(w)
double expectation(const FieldTable& f);
/// E f^2
double second_moment(const FieldTable& f);
/// E (f - E f)^2, two-pass.
double variance(const FieldTable& f);
/// max(1, E f^2): the reference magnitude for residual tolerances.
double residual_scale(const FieldTable& f);

/// Checks by enumeration that f does not change when only coordinate i does.
bool is_constant_along(const FieldTable& f, int i, double tolerance);

}  // namespace ijack
