#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ijack/conditional.hpp"
#include "ijack/hoeffding.hpp"
#include "ijack/jackknife.hpp"
#include "ijack/residuals.hpp"

namespace ijack {

/// Two-sided variance bracket at depth p.
///
///   lower_J  = sum_{k=1}^{2p}   (-1)^{k+1} E J_k / k!
///   upper_J  = sum_{k=1}^{2p-1} (-1)^{k+1} E J_k / k!
///   lower_JK = lower_J + E K_{2p+1} / (2p+1)!   (E K_{n+1} := 0)
///   upper_JK = upper_J - E K_{2p} / (2p)!
///
/// and lower_J <= lower_JK <= Var S <= upper_JK <= upper_J.
struct Bracket {
  int p = 0;
  double lower_J = 0.0;
  double lower_JK = 0.0;
  double upper_JK = 0.0;
  double upper_J = 0.0;

  friend bool operator==(const Bracket&, const Bracket&) = default;
};

/// Throws std::out_of_range unless 1 <= p <= n/2.
Bracket partial_sum_bracket(const JackknifeSpectrum& jack, int p);

/// The p = 0 chains
///   0 <= E K_1 <= Var S <= E J_1
///   0 <= E K_2 / 2 <= E J_1 - Var S <= E J_2 / 2
struct P0Chain {
  double EK1 = 0.0;
  double var = 0.0;
  double EJ1 = 0.0;
  double half_EK2 = 0.0;
  double bias = 0.0;  // E J_1 - Var S
  double half_EJ2 = 0.0;

  friend bool operator==(const P0Chain&, const P0Chain&) = default;
};

P0Chain p0_chain(double var, const JackknifeSpectrum& jack);

/// Residuals of the three exact expansions of Var S:
///   varexp      Var S = sum_k (-1)^{k+1} E J_k / k!
///   varexautre  Var S = E J_1 - sum_{k>=2} (k-1)/k! E K_k
///   varexK      Var S = sum_k E K_k / k!
Residuals variance_identities(double var, const JackknifeSpectrum& jack, double scale);

struct DegreeBound {
  int degree = 0;      // smallest d with Var f_d > 1e-12 * scale
  double lower = 0.0;  // E K_d / d!
  double upper = 0.0;  // E J_d / d!

  friend bool operator==(const DegreeBound&, const DegreeBound&) = default;
};

/// For S whose Hoeffding terms vanish below degree d:
///   E K_d / d! <= Var S <= E J_d / d!.
/// Empty when S is constant. Raises ConsistencyError if the bound is violated
/// by more than 1e-10 * scale.
std::optional<DegreeBound> degree_bound(std::span<const double> spectrum, const JackknifeSpectrum& jack, double var,
                                        double scale);

/// Residuals of E R_1 = Var S, E R_k = E J_{k-1}/(k-1)! - E R_{k-1}
/// (2 <= k <= n-1) and n! E R_n = E J_n.
Residuals proof_recursion_check(double var, const JackknifeSpectrum& jack, double scale);

/// Everything the exact engine knows about one instance.
struct BoundsReport {
  int n = 0;
  double mean = 0.0;
  double var_exact = 0.0;
  double scale = 1.0;
  // raw values
  std::vector<double> EJ;
  std::vector<double> EK;
  std::vector<double> ER;
  std::vector<double> spectrum;
  // max(0, .) of the above; the spectrum additionally reports |v| < 1e-12 * scale as 0
  std::vector<double> EJ_clamped;
  std::vector<double> EK_clamped;
  std::vector<double> ER_clamped;
  std::vector<double> spectrum_clamped;
  std::vector<Bracket> brackets;  // p = 1..n/2
  P0Chain p0;
  Residuals identities;  // varexp, varexautre, varexK
  Residuals lemma;
  Residuals recursion;
  std::optional<DegreeBound> corollary;

  /// Every bracket and both p = 0 chains hold within 1e-10 * scale.
  bool inequalities_hold() const;
  bool identities_hold() const { return identities.ok() && lemma.ok() && recursion.ok(); }

  friend bool operator==(const BoundsReport&, const BoundsReport&) = default;
};

/// The inequality tolerance used throughout: 1e-10 * scale.
inline double inequality_tolerance(double scale) { return 1e-10 * scale; }

BoundsReport build_bounds_report(const CondExpCache& cache);

}  // namespace ijack
