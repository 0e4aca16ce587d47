#include "ijack/index_set.hpp"

#include <stdexcept>

namespace ijack {

namespace {

void check_index(int i) {
  if (i < 0 || i >= IndexSet::kMaxCoordinates) {
    throw std::out_of_range("coordinate index " + std::to_string(i) + " outside [0, 64)");
  }
}

}  // namespace

IndexSet::IndexSet(std::initializer_list<int> indices) {
  for (int i : indices) {
    check_index(i);
    mask_ |= Mask{1} << i;
  }
}

IndexSet IndexSet::from_indices(std::span<const int> indices) {
  IndexSet s;
  for (int i : indices) {
    check_index(i);
    s = s.with(i);
  }
  return s;
}

void IndexSet::check_within(int n) const {
  if (!is_subset_of(full(n))) {
    throw std::out_of_range("index set " + to_string() + " not within " + std::to_string(n) +
                            " coordinates");
  }
}

std::vector<int> IndexSet::indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

}  // namespace ijack
