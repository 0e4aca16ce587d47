#pragma once

#include <cstdint>

namespace ijack {

/// k! as an exact integer; valid for 0 <= k <= 20.
std::uint64_t factorial(int k);

/// C(n, k) as an exact integer; valid for 0 <= n <= 64. Zero when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

/// n (n-1) ... (n-k+1); valid while the result fits in 64 bits.
std::uint64_t falling_factorial(int n, int k);

}  // namespace ijack
