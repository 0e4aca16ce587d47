#pragma once

#include <map>
#include <span>
#include <vector>

#include "ijack/conditional.hpp"
#include "ijack/jackknife.hpp"
#include "ijack/residuals.hpp"

namespace ijack {

/// h_I = sum_{J subset I} (-1)^{|I|-|J|} E[S | X_J], where E[S | X_J] keeps
/// the coordinates in J and integrates out the rest. Depends only on the
/// coordinates in I and integrates to zero along each of them.
/// Throws std::invalid_argument for an empty I.
FieldTable hoeffding_component(const CondExpCache& cache, IndexSet I);

struct HoeffdingDecomposition {
  double mean = 0.0;  // f_0 = E S
  /// h_I for every nonempty I, keyed by bitmask.
  std::map<IndexSet::Mask, FieldTable> components;
  /// Var f_d = sum_{|I|=d} E h_I^2, stored at index d-1.
  std::vector<double> spectrum;

  const FieldTable& component(IndexSet I) const { return components.at(I.mask()); }
};

/// Every component of S; 2^n - 1 tables, so meant for small n.
HoeffdingDecomposition hoeffding_decompose(const CondExpCache& cache);

/// Var f_1, ..., Var f_n without keeping the components around.
std::vector<double> degree_spectrum(const CondExpCache& cache);

/// Residuals of the three jackknife/Hoeffding correspondences, for every k:
///   E J_k / k! = sum_{j>=k} C(j,k) Var f_j
///   E K_k / k! = Var f_k
///   E J_k     = sum_{j>=k} E K_j / (j-k)!
/// The tolerance is 1e-9 * scale.
Residuals lemma_check(std::span<const double> spectrum, const JackknifeSpectrum& jack, double scale);

}  // namespace ijack
