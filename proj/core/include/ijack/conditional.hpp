#pragma once

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "ijack/index_set.hpp"
#include "ijack/model.hpp"

namespace ijack {

/// Exact mode enumerates up to 2^n conditional tables.
inline constexpr int kMaxExactDimension = 20;

/// E^(coordinate) f: averages f over one coordinate with its marginal weights,
/// keeping the others fixed. The result is constant along `coordinate`.
FieldTable integrate_out(const FieldTable& f, int coordinate);
/// E^(I) f for an arbitrary table, one coordinate at a time.
FieldTable integrate_out(const FieldTable& f, IndexSet coords);

/// Lazily memoized conditional expectations E^(I) base, keyed by bitmask.
///
/// E^(I) integrates out the coordinates in I and keeps the rest, so the empty
/// set gives back `base` and the full set gives the constant E base. Because
/// the operators commute, E^(I) is built from E^(I \ {max I}) and the order
/// in which I was assembled never matters.
///
/// Reads are safe from any number of threads. A missing entry may be computed
/// by two threads at once; both results are identical and the first stored
/// wins. Stored entries are never modified or removed, so returned references
/// live as long as the cache.
class CondExpCache {
 public:
  /// Throws std::invalid_argument when the space has more than
  /// `max_dimension` coordinates.
  explicit CondExpCache(FieldTable base, int max_dimension = kMaxExactDimension);

  CondExpCache(const CondExpCache&) = delete;
  CondExpCache& operator=(const CondExpCache&) = delete;

  const FieldTable& base() const { return *slots_[0]; }
  const ProductSpace& space() const { return base().space(); }
  const SpacePtr& space_ptr() const { return base().space_ptr(); }
  int dimension() const { return space().dimension(); }

  /// E^(I) base. Throws std::out_of_range if I is not within {0..n-1}.
  const FieldTable& cond_expect(IndexSet I) const;
  /// E_i base = E[base | X_0..X_{i-1}]: integrates out coordinates i..n-1.
  /// i = n returns base, i = 0 the constant E base.
  const FieldTable& prefix_expect(int i) const;
  /// E[(E^(I) base)^2], memoized.
  double second_moment(IndexSet I) const;

  double mean() const;
  /// max(1, E base^2)
  double scale() const { return scale_; }
  /// Pointwise clamp threshold for iterated variances: 1e-10 * scale.
  double clamp_epsilon() const { return 1e-10 * scale_; }

  /// Number of conditional tables currently stored.
  std::size_t populated() const;

 private:
  const FieldTable* find(IndexSet I) const;

  mutable std::shared_mutex mutex_;
  mutable std::vector<std::shared_ptr<const FieldTable>> slots_;
  mutable std::vector<double> moments_;  // NaN until computed
  double scale_ = 1.0;
};

/// Var^(I) base as a table, by the defining recursion
///   Var^(i1, rest) g = E^(i1) Var^(rest) g - Var^(rest) E^(i1) g,
///   Var^(i) g = E^(i) g^2 - (E^(i) g)^2,
/// peeling indices in increasing order. Constant along every coordinate of I.
/// Values in (-eps, 0) are clamped to 0; anything below -eps raises
/// ConsistencyError. Throws std::invalid_argument for an empty I.
FieldTable iterated_variance(const CondExpCache& cache, IndexSet I);

/// The same recursion, peeling indices in the given order (distinct indices).
FieldTable iterated_variance_ordered(const CondExpCache& cache, std::span<const int> order);

/// Var^(I) base from the closed inclusion-exclusion form
///   sum_{J subset I} (-1)^{|J|} E^(I \ J)[(E^(J) base)^2],
/// computed without recursion. Same contract as iterated_variance.
FieldTable iterated_variance_ie(const CondExpCache& cache, IndexSet I);

/// E Var^(I)(E^(conditioned) base) as a scalar.
///
/// Taking expectations in the recursion (E E^(i) = E) leaves
///   e(I, J) = e(I \ i1, J) - e(I \ i1, J + i1),  e({i}, J) = m(J) - m(J + i),
/// with m(J) = E[(E^(J) base)^2], so only the cache's second moments are
/// touched. Raises ConsistencyError below -eps; the raw value is returned
/// otherwise (it may be a tiny negative).
double expected_iterated_variance(const CondExpCache& cache, IndexSet I, IndexSet conditioned = {});

}  // namespace ijack
