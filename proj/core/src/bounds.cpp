#include "ijack/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ijack/combinatorics.hpp"
#include "ijack/errors.hpp"

namespace ijack {

namespace {

double alternating_sum(const JackknifeSpectrum& jack, int depth) {
  double s = 0.0;
  for (int k = 1; k <= depth; ++k) {
    const double term = jack.J(k) / static_cast<double>(factorial(k));
    s += (k % 2 == 1) ? term : -term;
  }
  return s;
}

bool ordered(std::initializer_list<double> chain, double tol) {
  const double* prev = nullptr;
  for (const double& v : chain) {
    if (prev && *prev > v + tol) return false;
    prev = &v;
  }
  return true;
}

std::vector<double> clamp(const std::vector<double>& v, double zero_below) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return std::abs(x) < zero_below ? 0.0 : std::max(0.0, x); });
  return out;
}

}  // namespace

Bracket partial_sum_bracket(const JackknifeSpectrum& jack, int p) {
  if (p < 1 || 2 * p > jack.n) {
    throw std::out_of_range("bracket depth p = " + std::to_string(p) + " outside [1, " + std::to_string(jack.n / 2) + "]");
  }
  Bracket b;
  b.p = p;
  b.lower_J = alternating_sum(jack, 2 * p);
  b.upper_J = alternating_sum(jack, 2 * p - 1);
  // K_{2p+1} is an empty sum once 2p+1 > n.
  const double k_odd = (2 * p + 1 <= jack.n) ? jack.K(2 * p + 1) / static_cast<double>(factorial(2 * p + 1)) : 0.0;
  b.lower_JK = b.lower_J + k_odd;
  b.upper_JK = b.upper_J - jack.K(2 * p) / static_cast<double>(factorial(2 * p));
  return b;
}

P0Chain p0_chain(double var, const JackknifeSpectrum& jack) {
  return P0Chain{jack.K(1), var, jack.J(1), 0.5 * jack.K(2), jack.J(1) - var, 0.5 * jack.J(2)};
}

Residuals variance_identities(double var, const JackknifeSpectrum& jack, double scale) {
  Residuals r;
  r.tolerance = 1e-9 * scale;
  double varexautre = jack.J(1);
  double varexK = 0.0;
  for (int k = 1; k <= jack.n; ++k) {
    const double kf = static_cast<double>(factorial(k));
    if (k >= 2) varexautre -= static_cast<double>(k - 1) / kf * jack.K(k);
    varexK += jack.K(k) / kf;
  }
  r.add("varexp", var - alternating_sum(jack, jack.n));
  r.add("varexautre", var - varexautre);
  r.add("varexK", var - varexK);
  return r;
}

std::optional<DegreeBound> degree_bound(std::span<const double> spectrum, const JackknifeSpectrum& jack, double var,
                                        double scale) {
  const auto it = std::find_if(spectrum.begin(), spectrum.end(), [&](double v) { return v > 1e-12 * scale; });
  if (it == spectrum.end()) return std::nullopt;
  const int d = static_cast<int>(it - spectrum.begin()) + 1;
  const double df = static_cast<double>(factorial(d));
  DegreeBound b{d, jack.K(d) / df, jack.J(d) / df};
  if (!ordered({b.lower, var, b.upper}, inequality_tolerance(scale))) {
    throw ConsistencyError("degree-" + std::to_string(d) + " bound violated: " + std::to_string(b.lower) +
                           " <= " + std::to_string(var) + " <= " + std::to_string(b.upper));
  }
  return b;
}

Residuals proof_recursion_check(double var, const JackknifeSpectrum& jack, double scale) {
  Residuals r;
  r.tolerance = 1e-9 * scale;
  const int n = jack.n;
  r.add("ER_1 = Var S", jack.R(1) - var);
  for (int k = 2; k <= n - 1; ++k) {
    r.add("ER recursion [k=" + std::to_string(k) + "]",
          jack.R(k) - (jack.J(k - 1) / static_cast<double>(factorial(k - 1)) - jack.R(k - 1)));
  }
  r.add("n! ER_n = EJ_n", static_cast<double>(factorial(n)) * jack.R(n) - jack.J(n));
  return r;
}

bool BoundsReport::inequalities_hold() const {
  const double tol = inequality_tolerance(scale);
  for (const auto& b : brackets) {
    if (!ordered({b.lower_J, b.lower_JK, var_exact, b.upper_JK, b.upper_J}, tol)) return false;
  }
  return ordered({0.0, p0.EK1, p0.var, p0.EJ1}, tol) && ordered({0.0, p0.half_EK2, p0.bias, p0.half_EJ2}, tol);
}

BoundsReport build_bounds_report(const CondExpCache& cache) {
  BoundsReport r;
  r.n = cache.dimension();
  r.mean = cache.mean();
  r.var_exact = variance(cache.base());
  r.scale = cache.scale();

  const JackknifeSpectrum jack = jackknife_spectrum(cache);
  r.EJ = jack.EJ;
  r.EK = jack.EK;
  r.ER = jack.ER;
  r.spectrum = degree_spectrum(cache);

  r.EJ_clamped = clamp(r.EJ, 0.0);
  r.EK_clamped = clamp(r.EK, 0.0);
  r.ER_clamped = clamp(r.ER, 0.0);
  r.spectrum_clamped = clamp(r.spectrum, 1e-12 * r.scale);

  for (int p = 1; 2 * p <= r.n; ++p) r.brackets.push_back(partial_sum_bracket(jack, p));
  r.p0 = p0_chain(r.var_exact, jack);
  r.identities = variance_identities(r.var_exact, jack, r.scale);
  r.lemma = lemma_check(r.spectrum, jack, r.scale);
  r.recursion = proof_recursion_check(r.var_exact, jack, r.scale);
  r.corollary = degree_bound(r.spectrum, jack, r.var_exact, r.scale);
  return r;
}

}  // namespace ijack
