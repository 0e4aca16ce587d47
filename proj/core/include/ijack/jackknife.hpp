#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ijack/conditional.hpp"
#include "ijack/index_set.hpp"
#include "ijack/model.hpp"

namespace ijack {

/// E J_k, E K_k and E R_k for k = 1..n, stored at index k-1.
struct JackknifeSpectrum {
  int n = 0;
  std::vector<double> EJ;
  std::vector<double> EK;
  std::vector<double> ER;

  /// Entry k (1-based), or 0 outside 1..n: the sums defining these quantities
  /// are empty there.
  double J(int k) const { return (k >= 1 && k <= n) ? EJ[k - 1] : 0.0; }
  double K(int k) const { return (k >= 1 && k <= n) ? EK[k - 1] : 0.0; }
  double R(int k) const { return (k >= 1 && k <= n) ? ER[k - 1] : 0.0; }
};

/// E J_k = k! sum_{|I| = k} E Var^(I) S. Throws std::out_of_range unless 1 <= k <= n.
double jackknife_J(const CondExpCache& cache, int k);

/// E K_k = k! sum_{|I| = k} E Var^(I) E^(complement of I) S.
///
/// E^(complement of I) S depends only on the coordinates in I; Var^(I) of it
/// is the iterated operator, which coincides with the plain variance only
/// when |I| = 1.
double jackknife_K(const CondExpCache& cache, int k);

/// E R_k = sum_{I sorted, |I| = k} E Var^(I)(E^(0..min I - 1) S), the
/// quantity driving the alternating bounds; for min I = 0 the prefix operator
/// is the identity. Computed from its definition, not from the recursion it
/// satisfies.
double proof_R(const CondExpCache& cache, int k);

JackknifeSpectrum jackknife_spectrum(const CondExpCache& cache);

/// E(sum_{J subset I} (-1)^{|J|} S_J)^2 by enumeration of the extended space
/// (every joint outcome times one independent copy per index of I), where S_J
/// has the coordinates in J replaced by their copies. Equals
/// 2^{|I|} E Var^(I) S. Throws std::length_error when the extended space
/// exceeds `outcome_cap`, std::invalid_argument for an empty I.
double iterated_difference_moment(const FieldTable& statistic, IndexSet I,
                                  std::uint64_t outcome_cap = kDefaultOutcomeCap);

/// Classical jackknife sum of squares over n+1 resampled statistic values,
/// sum_i (S_i - mean)^2. Cross-checks the pairwise form
/// (1/(n+1)) sum_{i<j} (S_i - S_j)^2 to 1e-12 relative and raises
/// ConsistencyError on disagreement. Throws std::invalid_argument for fewer
/// than two values.
double classical_jackknife(std::span<const double> values);

}  // namespace ijack
