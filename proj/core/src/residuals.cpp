#include "ijack/residuals.hpp"

#include <algorithm>
#include <cmath>

namespace ijack {

void Residuals::add(std::string name, double value) {
  entries.push_back({std::move(name), std::abs(value)});
}

double Residuals::max() const {
  double m = 0.0;
  for (const auto& e : entries) {
    if (std::isnan(e.value)) return e.value;
    m = std::max(m, e.value);
  }
  return m;
}

void Residuals::merge(const Residuals& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

}  // namespace ijack
