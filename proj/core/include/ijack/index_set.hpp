#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ijack {

/// A set of distinct coordinate indices, stored as a bitmask.
///
/// Coordinates are 0-based: bit `i` stands for the variable X_{i+1}. The
/// bitmask is the canonical sorted form, so two sets built from the same
/// indices in different orders compare equal. The empty set plays the role of
/// the identity operator when used to index conditional expectations.
class IndexSet {
 public:
  using Mask = std::uint64_t;
  static constexpr int kMaxCoordinates = 64;

  constexpr IndexSet() = default;
  IndexSet(std::initializer_list<int> indices);

  static constexpr IndexSet from_mask(Mask mask) {
    IndexSet s;
    s.mask_ = mask;
    return s;
  }
  static IndexSet from_indices(std::span<const int> indices);
  /// {0, ..., n-1}
  static constexpr IndexSet full(int n) {
    return from_mask(n >= kMaxCoordinates ? ~Mask{0} : (Mask{1} << n) - 1);
  }
  /// {0, ..., i-1}; the variables a prefix conditional expectation keeps.
  static constexpr IndexSet prefix(int i) { return full(i); }

  constexpr Mask mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int i) const { return (mask_ >> i) & Mask{1}; }
  /// Smallest index; undefined on the empty set.
  constexpr int min() const { return std::countr_zero(mask_); }
  /// Largest index; undefined on the empty set.
  constexpr int max() const { return kMaxCoordinates - 1 - std::countl_zero(mask_); }

  constexpr IndexSet with(int i) const { return from_mask(mask_ | (Mask{1} << i)); }
  constexpr IndexSet without(int i) const { return from_mask(mask_ & ~(Mask{1} << i)); }
  constexpr IndexSet complement(int n) const { return from_mask(full(n).mask_ & ~mask_); }
  constexpr bool is_subset_of(IndexSet other) const { return (mask_ & ~other.mask_) == 0; }

  /// Throws std::out_of_range if any index is >= n.
  void check_within(int n) const;

  std::vector<int> indices() const;
  /// "{1,3}" using 1-based variable numbering, for messages and reports.
  std::string to_string() const;

  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return from_mask(a.mask_ | b.mask_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return from_mask(a.mask_ & b.mask_); }
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) { return from_mask(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(IndexSet, IndexSet) = default;

 private:
  Mask mask_ = 0;
};

/// Calls f(J) for every J subset of `set`, including the empty set and `set`
/// itself, in increasing mask order.
template <class F>
void for_each_subset(IndexSet set, F&& f) {
  const IndexSet::Mask m = set.mask();
  IndexSet::Mask sub = 0;
  while (true) {
    f(IndexSet::from_mask(sub));
    if (sub == m) break;
    sub = (sub - m) & m;
  }
}

/// Calls f(I) for every I subset of {0..n-1} with |I| = k, in increasing mask
/// order (Gosper's hack). k = 0 yields the empty set once.
template <class F>
void for_each_k_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    f(IndexSet{});
    return;
  }
  using Mask = IndexSet::Mask;
  const Mask limit = IndexSet::full(n).mask();
  Mask s = (k == 64) ? ~Mask{0} : (Mask{1} << k) - 1;
  while (true) {
    f(IndexSet::from_mask(s));
    const Mask c = s & (~s + 1);
    const Mask r = s + c;
    if (r == 0 || (r & ~limit) != 0) break;
    s = (((r ^ s) >> 2) / c) | r;
    if ((s & ~limit) != 0) break;
  }
}

}  // namespace ijack
