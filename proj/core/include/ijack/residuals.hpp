#pragma once

#include <string>
#include <vector>

namespace ijack {

struct Residual {
  std::string name;
  double value = 0.0;  // absolute |lhs - rhs|

  friend bool operator==(const Residual&, const Residual&) = default;
};

/// A named collection of identity residuals checked against one tolerance.
struct Residuals {
  double tolerance = 0.0;
  std::vector<Residual> entries;

  void add(std::string name, double value);
  /// Largest residual (0 when empty).
  double max() const;
  bool ok() const { return max() <= tolerance; }
  /// Appends the entries of `other`; the tolerance is unchanged.
  void merge(const Residuals& other);

  friend bool operator==(const Residuals&, const Residuals&) = default;
};

}  // namespace ijack
