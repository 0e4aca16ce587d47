#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ijack/index_set.hpp"
#include "ijack/model.hpp"
#include "ijack/rng.hpp"

namespace ijack {

enum class SubsetMode {
  automatic,  // enumerate when C(n, k) <= 64, sample otherwise
  enumerate,  // every k-subset in every sample
  sample,     // one uniform k-subset per sample, reweighted by C(n, k)
};

struct McConfig {
  std::uint64_t seed = 0;
  std::size_t outer_samples = 10000;
  std::size_t inner_pairs = 1;
  std::vector<int> ks;  // target orders; empty means 1..n
  SubsetMode subset_mode = SubsetMode::automatic;
  unsigned threads = 1;

  /// Throws std::invalid_argument unless outer_samples >= 2 and inner_pairs >= 1.
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  /// The point estimate of a non-negative quantity came out negative.
  bool negative = false;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

/// One joint outcome (support digits) drawn coordinate-wise by inverse CDF.
std::vector<std::size_t> sample_outcome(const ProductSpace& space, SplitMix64& rng);

/// Unbiased estimate of E J_k from iterated differences: each sample draws X
/// and one fresh copy per coordinate and contributes
///   k!/2^k sum_I D_I^2,  D_I = sum_{J subset I} (-1)^{|J|} S_J,
/// over all k-subsets I (enumerate) or k! C(n,k)/2^k D_I^2 for one uniform I
/// (sample).
///
/// Results are bit-identical for a given seed and config regardless of
/// `threads`: contributions are stored per sample index and summed in index
/// order.
McEstimate estimate_EJ(const ProductSpace& space, const Statistic& statistic, int k, const McConfig& cfg);

/// Unbiased estimate of E K_k = k! sum_{|I|=k} E h_I^2.
///
/// For each J subset of I, two completions of X sharing only X_J give
/// S' S'' with expectation E[(E[S | X_J])^2]; the Moebius sum
///   sum_{J subset I} (-1)^{|I|-|J|} S'_J S''_J
/// is then unbiased for E h_I^2. The J = empty term is the product of two
/// independent draws, an unbiased (E S)^2. Each term averages `inner_pairs`
/// pairs. The estimate can be negative on finite samples; it is reported
/// unclamped with `negative` set.
McEstimate estimate_EK(const ProductSpace& space, const Statistic& statistic, int k, const McConfig& cfg);

/// Unbiased estimate of Var S from (S(Y) - S(Z))^2 / 2 on independent pairs.
McEstimate estimate_variance(const ProductSpace& space, const Statistic& statistic, const McConfig& cfg);

/// Sampled counterpart of iterated_difference_moment: E D_I^2.
McEstimate estimate_difference_moment(const ProductSpace& space, const Statistic& statistic, IndexSet I,
                                      const McConfig& cfg);

struct EstimatedBracket {
  int p = 0;
  McEstimate lower_J;
  McEstimate lower_JK;
  McEstimate upper_JK;
  McEstimate upper_J;
};

/// The depth-p bracket from independent estimates of E J_1..E J_2p, E K_2p
/// and E K_{2p+1} (when 2p+1 <= n). Standard errors combine as
/// sqrt(sum c_k^2 se_k^2). Throws std::out_of_range unless 1 <= p <= n/2.
EstimatedBracket estimate_bracket(const ProductSpace& space, const Statistic& statistic, int p, const McConfig& cfg);

/// Upward bias E J_1 - Var S of the classical jackknife for a symmetric
/// statistic of iid coordinates. Each sample draws X_1..X_n and a copy X~,
/// forms S_i = S(X without X_i, then X~) for i <= n and S_{n+1} = S(X), and
/// contributes classical_jackknife(S_1..S_{n+1}) - (S(Y) - S(Z))^2 / 2.
/// Throws std::invalid_argument for a non-iid space or when a spot check
/// finds S not permutation invariant.
McEstimate mc_efron_stein_bias(const ProductSpace& space, const Statistic& statistic, const McConfig& cfg);

}  // namespace ijack
