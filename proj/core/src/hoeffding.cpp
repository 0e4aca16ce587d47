#include "ijack/hoeffding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ijack/combinatorics.hpp"

namespace ijack {

FieldTable hoeffding_component(const CondExpCache& cache, IndexSet I) {
  if (I.empty()) throw std::invalid_argument("Hoeffding component needs a nonempty index set");
  const int n = cache.dimension();
  I.check_within(n);
  std::vector<double> acc(cache.base().size(), 0.0);
  for_each_subset(I, [&](IndexSet J) {
    const FieldTable& kept = cache.cond_expect(J.complement(n));
    const double sign = ((I.size() - J.size()) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] += sign * kept[w];
  });
  return FieldTable(cache.space_ptr(), std::move(acc), I.complement(n));
}

HoeffdingDecomposition hoeffding_decompose(const CondExpCache& cache) {
  const int n = cache.dimension();
  HoeffdingDecomposition d;
  d.mean = cache.mean();
  d.spectrum.assign(static_cast<std::size_t>(n), 0.0);
  for (IndexSet::Mask m = 1; m < (IndexSet::Mask{1} << n); ++m) {
    const IndexSet I = IndexSet::from_mask(m);
    FieldTable h = hoeffding_component(cache, I);
    d.spectrum[static_cast<std::size_t>(I.size() - 1)] += second_moment(h);
    d.components.emplace(m, std::move(h));
  }
  return d;
}

std::vector<double> degree_spectrum(const CondExpCache& cache) {
  const int n = cache.dimension();
  std::vector<double> spectrum(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k <= n; ++k) {
    for_each_k_subset(n, k, [&](IndexSet I) {
      spectrum[static_cast<std::size_t>(k - 1)] += second_moment(hoeffding_component(cache, I));
    });
  }
  return spectrum;
}

Residuals lemma_check(std::span<const double> spectrum, const JackknifeSpectrum& jack, double scale) {
  Residuals r;
  r.tolerance = 1e-9 * scale;
  const int n = jack.n;
  if (static_cast<int>(spectrum.size()) != n) throw std::invalid_argument("spectrum length differs from n");
  for (int k = 1; k <= n; ++k) {
    const double kf = static_cast<double>(factorial(k));
    double binom_sum = 0.0;
    double k_sum = 0.0;
    for (int j = k; j <= n; ++j) {
      binom_sum += static_cast<double>(binomial(j, k)) * spectrum[static_cast<std::size_t>(j - 1)];
      k_sum += jack.K(j) / static_cast<double>(factorial(j - k));
    }
    const std::string tag = "[k=" + std::to_string(k) + "]";
    r.add("EJ/k! = sum C(j,k) Var f_j " + tag, jack.J(k) / kf - binom_sum);
    r.add("EK/k! = Var f_k " + tag, jack.K(k) / kf - spectrum[static_cast<std::size_t>(k - 1)]);
    r.add("EJ = sum EK_j/(j-k)! " + tag, jack.J(k) - k_sum);
  }
  return r;
}

}  // namespace ijack
