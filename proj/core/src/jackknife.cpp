#include "ijack/jackknife.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ijack/combinatorics.hpp"
#include "ijack/errors.hpp"

namespace ijack {

namespace {

void check_order(const CondExpCache& cache, int k) {
  if (k < 1 || k > cache.dimension()) {
    throw std::out_of_range("order k = " + std::to_string(k) + " outside [1, " + std::to_string(cache.dimension()) + "]");
  }
}

}  // namespace

double jackknife_J(const CondExpCache& cache, int k) {
  check_order(cache, k);
  double sum = 0.0;
  for_each_k_subset(cache.dimension(), k, [&](IndexSet I) { sum += expected_iterated_variance(cache, I); });
  return static_cast<double>(factorial(k)) * sum;
}

double jackknife_K(const CondExpCache& cache, int k) {
  check_order(cache, k);
  const int n = cache.dimension();
  double sum = 0.0;
  for_each_k_subset(n, k, [&](IndexSet I) { sum += expected_iterated_variance(cache, I, I.complement(n)); });
  return static_cast<double>(factorial(k)) * sum;
}

double proof_R(const CondExpCache& cache, int k) {
  check_order(cache, k);
  double sum = 0.0;
  for_each_k_subset(cache.dimension(), k,
                    [&](IndexSet I) { sum += expected_iterated_variance(cache, I, IndexSet::prefix(I.min())); });
  return sum;
}

JackknifeSpectrum jackknife_spectrum(const CondExpCache& cache) {
  JackknifeSpectrum s;
  s.n = cache.dimension();
  for (int k = 1; k <= s.n; ++k) {
    s.EJ.push_back(jackknife_J(cache, k));
    s.EK.push_back(jackknife_K(cache, k));
    s.ER.push_back(proof_R(cache, k));
  }
  return s;
}

double iterated_difference_moment(const FieldTable& statistic, IndexSet I, std::uint64_t outcome_cap) {
  if (I.empty()) throw std::invalid_argument("iterated difference needs a nonempty index set");
  const ProductSpace& space = statistic.space();
  I.check_within(space.dimension());
  const auto idx = I.indices();
  const std::size_t k = idx.size();

  std::uint64_t copies = 1;
  for (int i : idx) copies *= space.radix(i);
  if (copies > outcome_cap / space.outcome_count()) {
    throw std::length_error("extended space for " + I.to_string() + " exceeds the outcome cap");
  }

  std::vector<std::size_t> copy(k, 0);
  double total = 0.0;
  for (std::size_t w = 0; w < space.outcome_count(); ++w) {
    const double pw = space.probability(w);
    std::fill(copy.begin(), copy.end(), 0);
    for (std::uint64_t c = 0; c < copies; ++c) {
      double pc = 1.0;
      for (std::size_t q = 0; q < k; ++q) pc *= space.marginal(idx[q]).prob(copy[q]);
      // D = sum over subsets J of I (as bitmasks over positions in idx)
      double diff = 0.0;
      for (std::uint64_t J = 0; J < (std::uint64_t{1} << k); ++J) {
        std::size_t v = w;
        for (std::size_t q = 0; q < k; ++q) {
          if ((J >> q) & 1U) v = space.with_digit(v, idx[q], copy[q]);
        }
        diff += (std::popcount(J) % 2 == 0 ? 1.0 : -1.0) * statistic[v];
      }
      total += pw * pc * diff * diff;
      for (std::size_t q = 0; q < k; ++q) {
        if (++copy[q] < space.radix(idx[q])) break;
        copy[q] = 0;
      }
    }
  }
  return total;
}

double classical_jackknife(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("classical jackknife needs at least two values");
  const auto m = static_cast<double>(values.size());
  // Center on the first value so that equal inputs give exactly zero.
  const double shift = values[0];
  double mean = 0.0;
  for (double v : values) mean += v - shift;
  mean /= m;
  double centered = 0.0;
  for (double v : values) centered += (v - shift - mean) * (v - shift - mean);

  double pairwise = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) pairwise += (values[i] - values[j]) * (values[i] - values[j]);
  }
  pairwise /= m;

  const double tol = 1e-12 * std::max(std::abs(centered), std::abs(pairwise));
  if (std::abs(centered - pairwise) > tol) {
    throw ConsistencyError("classical jackknife: centered form " + std::to_string(centered) +
                           " disagrees with pairwise form " + std::to_string(pairwise));
  }
  return centered;
}

}  // namespace ijack
