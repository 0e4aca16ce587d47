#include "ijack/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ijack {

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) throw std::invalid_argument("distribution has an empty support");
  if (support_.size() != probs_.size()) {
    throw std::invalid_argument("support has " + std::to_string(support_.size()) + " values but probs has " +
                                std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (std::size_t d = 0; d < support_.size(); ++d) {
    if (!std::isfinite(support_[d])) throw std::invalid_argument("support value is not finite");
    if (!(probs_[d] >= 0.0) || !std::isfinite(probs_[d])) {
      throw std::invalid_argument("probability " + std::to_string(d) + " is negative or not finite");
    }
    total += probs_[d];
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
  }
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t d = 0; d < probs_.size(); ++d) {
    probs_[d] /= total;
    acc += probs_[d];
    cdf_[d] = acc;
  }
  cdf_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) { return {{value}, {1.0}}; }

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> support) {
  std::vector<double> probs(support.size(), support.empty() ? 0.0 : 1.0 / static_cast<double>(support.size()));
  return {std::move(support), std::move(probs)};
}

DiscreteDistribution DiscreteDistribution::rademacher() { return {{-1.0, 1.0}, {0.5, 0.5}}; }

std::size_t DiscreteDistribution::digit_for(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto d = static_cast<std::size_t>(it - cdf_.begin());
  return std::min(d, cdf_.size() - 1);
}

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t d = 0; d < size(); ++d) m += probs_[d] * support_[d];
  return m;
}

double DiscreteDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t d = 0; d < size(); ++d) v += probs_[d] * (support_[d] - m) * (support_[d] - m);
  return v;
}

// ---------------------------------------------------------------------------
// ProductSpace

ProductSpace::ProductSpace(std::vector<DiscreteDistribution> dists, std::uint64_t outcome_cap)
    : dists_(std::move(dists)) {
  if (dists_.empty()) throw std::invalid_argument("product space needs at least one coordinate");
  if (dists_.size() > static_cast<std::size_t>(IndexSet::kMaxCoordinates)) {
    throw std::invalid_argument("product space supports at most 64 coordinates");
  }
  strides_.resize(dists_.size());
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dists_.size(); ++i) {
    strides_[i] = count;
    const std::uint64_t r = dists_[i].size();
    if (enumerable_ && count > std::numeric_limits<std::uint64_t>::max() / r) enumerable_ = false;
    if (enumerable_) count *= r;
  }
  if (outcome_cap != kUnboundedOutcomes && (!enumerable_ || count > outcome_cap)) {
    throw std::length_error("joint outcome count " + (enumerable_ ? std::to_string(count) : std::string("> 2^64")) +
                            " exceeds the cap of " + std::to_string(outcome_cap));
  }
  outcome_count_ = enumerable_ ? count : 0;
}

std::size_t ProductSpace::encode(std::span<const std::size_t> digits) const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) w += digits[i] * strides_[i];
  return w;
}

std::vector<std::size_t> ProductSpace::decode(std::size_t outcome) const {
  std::vector<std::size_t> digits(dists_.size());
  for (std::size_t i = 0; i < dists_.size(); ++i) {
    digits[i] = outcome % dists_[i].size();
    outcome /= dists_[i].size();
  }
  return digits;
}

double ProductSpace::probability(std::size_t outcome) const {
  double p = 1.0;
  for (const auto& d : dists_) {
    p *= d.prob(outcome % d.size());
    outcome /= d.size();
  }
  return p;
}

bool ProductSpace::is_iid() const {
  return std::all_of(dists_.begin(), dists_.end(), [&](const auto& d) { return d == dists_.front(); });
}

SpacePtr build_space(std::vector<DiscreteDistribution> dists, std::uint64_t outcome_cap) {
  return std::make_shared<const ProductSpace>(std::move(dists), outcome_cap);
}

// ---------------------------------------------------------------------------
// Statistic

const char* to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::table: return "table";
    case StatisticKind::sum: return "sum";
    case StatisticKind::max: return "max";
    case StatisticKind::ustat2: return "ustat2";
    case StatisticKind::poly: return "poly";
  }
  return "?";
}

Statistic Statistic::table(std::vector<double> values) {
  Statistic s;
  s.kind_ = StatisticKind::table;
  s.values_ = std::move(values);
  return s;
}

Statistic Statistic::sum(std::vector<double> weights) {
  Statistic s;
  s.kind_ = StatisticKind::sum;
  s.values_ = std::move(weights);
  return s;
}

Statistic Statistic::max() {
  Statistic s;
  s.kind_ = StatisticKind::max;
  return s;
}

Statistic Statistic::ustat2(std::vector<std::pair<double, double>> value_map) {
  Statistic s;
  s.kind_ = StatisticKind::ustat2;
  std::sort(value_map.begin(), value_map.end());
  for (std::size_t i = 1; i < value_map.size(); ++i) {
    if (value_map[i].first == value_map[i - 1].first) {
      throw std::invalid_argument("ustat2 value map lists " + std::to_string(value_map[i].first) + " twice");
    }
  }
  s.value_map_ = std::move(value_map);
  return s;
}

Statistic Statistic::poly(std::vector<Monomial> terms) {
  Statistic s;
  s.kind_ = StatisticKind::poly;
  for (const auto& t : terms) {
    if (std::any_of(t.exponents.begin(), t.exponents.end(), [](int e) { return e < 0; })) {
      throw std::invalid_argument("poly exponents must be non-negative");
    }
  }
  s.terms_ = std::move(terms);
  return s;
}

Statistic Statistic::constant(double c) { return poly({Monomial{c, {}}}); }

double Statistic::mapped(double x) const {
  if (value_map_.empty()) return x;
  const auto it = std::lower_bound(value_map_.begin(), value_map_.end(), x,
                                   [](const auto& entry, double v) { return entry.first < v; });
  if (it == value_map_.end() || it->first != x) {
    throw std::invalid_argument("ustat2 value map has no entry for " + std::to_string(x));
  }
  return it->second;
}

void Statistic::validate(const ProductSpace& space) const {
  const auto n = static_cast<std::size_t>(space.dimension());
  switch (kind_) {
    case StatisticKind::table:
      if (!space.enumerable() || values_.size() != space.outcome_count()) {
        throw std::invalid_argument("table statistic has " + std::to_string(values_.size()) +
                                    " values but the space has " + std::to_string(space.outcome_count()) +
                                    " outcomes");
      }
      break;
    case StatisticKind::sum:
      if (values_.size() != n) {
        throw std::invalid_argument("sum statistic has " + std::to_string(values_.size()) + " weights for " +
                                    std::to_string(n) + " coordinates");
      }
      break;
    case StatisticKind::max:
      break;
    case StatisticKind::ustat2:
      for (const auto& d : space.marginals()) {
        for (double x : d.support()) (void)mapped(x);
      }
      break;
    case StatisticKind::poly:
      for (const auto& t : terms_) {
        if (t.exponents.size() > n) {
          throw std::invalid_argument("poly term has " + std::to_string(t.exponents.size()) + " exponents for " +
                                      std::to_string(n) + " coordinates");
        }
      }
      break;
  }
}

double Statistic::evaluate(const ProductSpace& space, std::span<const std::size_t> digits) const {
  const std::size_t n = digits.size();
  switch (kind_) {
    case StatisticKind::table:
      return values_[space.encode(digits)];
    case StatisticKind::sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += values_[i] * space.marginal(static_cast<int>(i)).value(digits[i]);
      return s;
    }
    case StatisticKind::max: {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) m = std::max(m, space.marginal(static_cast<int>(i)).value(digits[i]));
      return m;
    }
    case StatisticKind::ustat2: {
      double s = 0.0;
      double prefix = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = mapped(space.marginal(static_cast<int>(i)).value(digits[i]));
        s += g * prefix;
        prefix += g;
      }
      return s;
    }
    case StatisticKind::poly: {
      double s = 0.0;
      for (const auto& t : terms_) {
        double term = t.coefficient;
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
          if (t.exponents[i] != 0) term *= std::pow(space.marginal(static_cast<int>(i)).value(digits[i]), t.exponents[i]);
        }
        s += term;
      }
      return s;
    }
  }
  return 0.0;
}

bool operator==(const Statistic& a, const Statistic& b) {
  if (a.kind_ != b.kind_ || a.values_ != b.values_ || a.value_map_ != b.value_map_) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t t = 0; t < a.terms_.size(); ++t) {
    if (a.terms_[t].coefficient != b.terms_[t].coefficient || a.terms_[t].exponents != b.terms_[t].exponents) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldTable

FieldTable::FieldTable(SpacePtr space, std::vector<double> values, IndexSet constant_coords)
    : space_(std::move(space)), values_(std::move(values)), constant_coords_(constant_coords) {
  if (!space_) throw std::invalid_argument("field table needs a space");
  if (!space_->enumerable() || values_.size() != space_->outcome_count()) {
    throw std::invalid_argument("field table has " + std::to_string(values_.size()) + " values for " +
                                std::to_string(space_->outcome_count()) + " outcomes");
  }
  constant_coords_.check_within(space_->dimension());
}

FieldTable tabulate(const Statistic& statistic, SpacePtr space) {
  if (!space->enumerable()) throw std::invalid_argument("cannot tabulate over a non-enumerable space");
  statistic.validate(*space);
  if (statistic.kind() == StatisticKind::table) {
    const auto v = statistic.table_values();
    return FieldTable(space, std::vector<double>(v.begin(), v.end()));
  }
  const std::size_t count = space->outcome_count();
  const int n = space->dimension();
  std::vector<double> values(count);
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  for (std::size_t w = 0; w < count; ++w) {
    values[w] = statistic.evaluate(*space, digits);
    // mixed-radix increment, coordinate 0 fastest
    for (int i = 0; i < n; ++i) {
      if (++digits[static_cast<std::size_t>(i)] < space->radix(i)) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }
  return FieldTable(std::move(space), std::move(values));
}

FieldTable constant_table(SpacePtr space, double value) {
  const std::size_t count = space->outcome_count();
  const int n = space->dimension();
  return FieldTable(std::move(space), std::vector<double>(count, value), IndexSet::full(n));
}

namespace {

// Integrates coordinates out one at a time (coordinate 0 is contiguous), so
// the joint probabilities are never materialized.
template <class Transform>
double weighted_mean(const FieldTable& f, Transform&& transform) {
  const ProductSpace& space = f.space();
  const auto values = f.values();
  const std::size_t r0 = space.radix(0);
  const auto p0 = space.marginal(0).probs();
  std::vector<double> cur(values.size() / r0);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    double s = 0.0;
    for (std::size_t d = 0; d < r0; ++d) s += p0[d] * transform(values[j * r0 + d]);
    cur[j] = s;
  }
  for (int i = 1; i < space.dimension(); ++i) {
    const std::size_t r = space.radix(i);
    const auto p = space.marginal(i).probs();
    const std::size_t m = cur.size() / r;
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < r; ++d) s += p[d] * cur[j * r + d];
      cur[j] = s;
    }
    cur.resize(m);
  }
  return cur.front();
}

}  // namespace

double expectation(const FieldTable& f) {
  return weighted_mean(f, [](double v) { return v; });
}

double second_moment(const FieldTable& f) {
  return weighted_mean(f, [](double v) { return v * v; });
}

double variance(const FieldTable& f) {
  const double m = expectation(f);
  return weighted_mean(f, [m](double v) { return (v - m) * (v - m); });
}

double residual_scale(const FieldTable& f) { return std::max(1.0, second_moment(f)); }

bool is_constant_along(const FieldTable& f, int i, double tolerance) {
  const ProductSpace& space = f.space();
  const std::size_t stride = space.stride(i);
  const std::size_t r = space.radix(i);
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (space.digit(w, i) != 0) continue;
    for (std::size_t d = 1; d < r; ++d) {
      if (std::abs(f[w + d * stride] - f[w]) > tolerance) return false;
    }
  }
  return true;
}

}  // namespace ijack
