#include "ijack/combinatorics.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ijack {

std::uint64_t factorial(int k) {
  if (k < 0 || k > 20) throw std::out_of_range("factorial(" + std::to_string(k) + ") exceeds 64 bits");
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 64) throw std::out_of_range("binomial: n = " + std::to_string(n));
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // r * (n - k + i) is divisible by i at step i; dividing out gcd(r, i)
  // first keeps every intermediate within the final result's range.
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    const auto den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(r, den);
    r = (r / g) * (num / (den / g));
  }
  return r;
}

std::uint64_t falling_factorial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) {
    const auto f = static_cast<std::uint64_t>(n - i);
    if (f != 0 && r > std::numeric_limits<std::uint64_t>::max() / f) throw std::out_of_range("falling_factorial overflow");
    r *= f;
  }
  return r;
}

}  // namespace ijack
