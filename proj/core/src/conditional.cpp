#include "ijack/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "ijack/errors.hpp"

namespace ijack {

FieldTable integrate_out(const FieldTable& f, int coordinate) {
  const ProductSpace& space = f.space();
  if (coordinate < 0 || coordinate >= space.dimension()) {
    throw std::out_of_range("coordinate " + std::to_string(coordinate) + " out of range");
  }
  if (f.constant_coords().contains(coordinate)) return f;
  const std::size_t stride = space.stride(coordinate);
  const std::size_t r = space.radix(coordinate);
  const std::size_t block = stride * r;
  const auto p = space.marginal(coordinate).probs();
  const auto in = f.values();
  std::vector<double> out(in.size());
  for (std::size_t base = 0; base < in.size(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t w0 = base + inner;
      double s = 0.0;
      for (std::size_t d = 0; d < r; ++d) s += p[d] * in[w0 + d * stride];
      for (std::size_t d = 0; d < r; ++d) out[w0 + d * stride] = s;
    }
  }
  return FieldTable(f.space_ptr(), std::move(out), f.constant_coords().with(coordinate));
}

FieldTable integrate_out(const FieldTable& f, IndexSet coords) {
  coords.check_within(f.space().dimension());
  FieldTable g = f;
  for (int i : coords.indices()) g = integrate_out(g, i);
  return g;
}

// ---------------------------------------------------------------------------
// CondExpCache

CondExpCache::CondExpCache(FieldTable base, int max_dimension) {
  const int n = base.space().dimension();
  if (n > max_dimension || n > kMaxExactDimension) {
    throw std::invalid_argument("exact mode supports at most " + std::to_string(std::min(max_dimension, kMaxExactDimension)) +
                                " coordinates, got " + std::to_string(n));
  }
  const std::size_t slots = std::size_t{1} << n;
  slots_.resize(slots);
  moments_.assign(slots, std::numeric_limits<double>::quiet_NaN());
  scale_ = residual_scale(base);
  slots_[0] = std::make_shared<const FieldTable>(std::move(base));
}

const FieldTable* CondExpCache::find(IndexSet I) const {
  std::shared_lock lock(mutex_);
  return slots_[I.mask()].get();
}

const FieldTable& CondExpCache::cond_expect(IndexSet I) const {
  I.check_within(dimension());
  if (const FieldTable* hit = find(I)) return *hit;
  // Build from the parent one coordinate smaller; recursion depth <= n.
  const int last = I.max();
  const FieldTable& parent = cond_expect(I.without(last));
  auto table = std::make_shared<const FieldTable>(integrate_out(parent, last));
  std::unique_lock lock(mutex_);
  auto& slot = slots_[I.mask()];
  if (!slot) slot = std::move(table);
  return *slot;
}

const FieldTable& CondExpCache::prefix_expect(int i) const {
  const int n = dimension();
  if (i < 0 || i > n) throw std::out_of_range("prefix index " + std::to_string(i) + " outside [0, " + std::to_string(n) + "]");
  return cond_expect(IndexSet::prefix(i).complement(n));
}

double CondExpCache::second_moment(IndexSet I) const {
  I.check_within(dimension());
  {
    std::shared_lock lock(mutex_);
    const double m = moments_[I.mask()];
    if (!std::isnan(m)) return m;
  }
  const double m = ijack::second_moment(cond_expect(I));
  std::unique_lock lock(mutex_);
  moments_[I.mask()] = m;
  return m;
}

double CondExpCache::mean() const { return cond_expect(IndexSet::full(dimension()))[0]; }

std::size_t CondExpCache::populated() const {
  std::shared_lock lock(mutex_);
  return static_cast<std::size_t>(std::count_if(slots_.begin(), slots_.end(), [](const auto& s) { return s != nullptr; }));
}

// ---------------------------------------------------------------------------
// Iterated variances

namespace {

std::vector<double> squared(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return x * x; });
  return out;
}

FieldTable clamp_nonnegative(FieldTable t, const CondExpCache& cache, IndexSet I) {
  const double eps = cache.clamp_epsilon();
  std::vector<double> v(t.values().begin(), t.values().end());
  for (double& x : v) {
    if (x < -eps || std::isnan(x)) {
      throw ConsistencyError("Var^" + I.to_string() + " has value " + std::to_string(x) + " below -" +
                             std::to_string(eps));
    }
    if (x < 0.0) x = 0.0;
  }
  return FieldTable(t.space_ptr(), std::move(v), I);
}

FieldTable subtract(const FieldTable& a, const FieldTable& b, IndexSet constant) {
  std::vector<double> v(a.size());
  for (std::size_t w = 0; w < v.size(); ++w) v[w] = a[w] - b[w];
  return FieldTable(a.space_ptr(), std::move(v), constant);
}

// Var^(order[pos..]) E^(conditioned) base, memoized on (pos, conditioned).
class OrderedRecursion {
 public:
  OrderedRecursion(const CondExpCache& cache, std::span<const int> order) : cache_(cache), order_(order) {}

  const FieldTable& eval(std::size_t pos, IndexSet conditioned) {
    const auto key = std::make_pair(pos, conditioned.mask());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int i = order_[pos];
    IndexSet remaining;
    for (std::size_t q = pos; q < order_.size(); ++q) remaining = remaining.with(order_[q]);
    const IndexSet constant = remaining | conditioned;
    FieldTable result = [&] {
      if (pos + 1 == order_.size()) {
        // Var^(i) g = E^(i) g^2 - (E^(i) g)^2 with g = E^(conditioned) base
        const FieldTable& g = cache_.cond_expect(conditioned);
        FieldTable g2(g.space_ptr(), squared(g.values()), g.constant_coords());
        return subtract(integrate_out(g2, i), FieldTable(g.space_ptr(), squared(cache_.cond_expect(conditioned.with(i)).values())),
                        constant);
      }
      const FieldTable& inner = eval(pos + 1, conditioned);
      const FieldTable& shifted = eval(pos + 1, conditioned.with(i));
      return subtract(integrate_out(inner, i), shifted, constant);
    }();
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  const CondExpCache& cache_;
  std::span<const int> order_;
  std::map<std::pair<std::size_t, IndexSet::Mask>, FieldTable> memo_;
};

}  // namespace

FieldTable iterated_variance_ordered(const CondExpCache& cache, std::span<const int> order) {
  if (order.empty()) throw std::invalid_argument("iterated variance needs a nonempty index set");
  const IndexSet I = IndexSet::from_indices(order);
  if (static_cast<std::size_t>(I.size()) != order.size()) {
    throw std::invalid_argument("iterated variance indices must be distinct");
  }
  I.check_within(cache.dimension());
  OrderedRecursion rec(cache, order);
  return clamp_nonnegative(rec.eval(0, IndexSet{}), cache, I);
}

FieldTable iterated_variance(const CondExpCache& cache, IndexSet I) {
  if (I.empty()) throw std::invalid_argument("iterated variance needs a nonempty index set");
  const auto order = I.indices();
  return iterated_variance_ordered(cache, order);
}

FieldTable iterated_variance_ie(const CondExpCache& cache, IndexSet I) {
  if (I.empty()) throw std::invalid_argument("iterated variance needs a nonempty index set");
  I.check_within(cache.dimension());
  const auto& space = cache.space_ptr();
  std::vector<double> acc(cache.base().size(), 0.0);
  for_each_subset(I, [&](IndexSet J) {
    const FieldTable& g = cache.cond_expect(J);
    const FieldTable term = integrate_out(FieldTable(space, squared(g.values()), g.constant_coords()), I - J);
    const double sign = (J.size() % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] += sign * term[w];
  });
  return clamp_nonnegative(FieldTable(space, std::move(acc), I), cache, I);
}

namespace {

double expected_recursion(const CondExpCache& cache, IndexSet I, IndexSet conditioned) {
  const int first = I.min();
  const IndexSet rest = I.without(first);
  if (rest.empty()) return cache.second_moment(conditioned) - cache.second_moment(conditioned.with(first));
  return expected_recursion(cache, rest, conditioned) - expected_recursion(cache, rest, conditioned.with(first));
}

}  // namespace

double expected_iterated_variance(const CondExpCache& cache, IndexSet I, IndexSet conditioned) {
  if (I.empty()) throw std::invalid_argument("iterated variance needs a nonempty index set");
  I.check_within(cache.dimension());
  conditioned.check_within(cache.dimension());
  const double e = expected_recursion(cache, I, conditioned);
  if (e < -cache.clamp_epsilon() || std::isnan(e)) {
    throw ConsistencyError("E Var^" + I.to_string() + " = " + std::to_string(e) + " is negative");
  }
  return e;
}

}  // namespace ijack
