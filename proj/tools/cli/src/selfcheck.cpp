#include "ijack/cli/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "ijack/bounds.hpp"
#include "ijack/combinatorics.hpp"
#include "ijack/conditional.hpp"
#include "ijack/errors.hpp"
#include "ijack/hoeffding.hpp"

namespace ijack::cli {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kInequalityTol = 1e-10;
constexpr double kCommuteTol = 1e-12;  // same sums, different association order

class Tally {
 public:
  explicit Tally(std::vector<CheckSummary>& checks) : checks_(checks) {}

  void record(const std::string& name, double relative, double tolerance) {
    auto it = std::find_if(checks_.begin(), checks_.end(), [&](const auto& c) { return c.name == name; });
    if (it == checks_.end()) {
      checks_.push_back({name, 0.0, tolerance, 0});
      it = checks_.end() - 1;
    }
    const bool bad = !(relative <= tolerance);
    it->max_residual = std::isnan(relative) ? relative : std::max(it->max_residual, relative);
    if (bad) {
      ++it->failures;
      if (first_.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", relative);
        first_ = name + ": relative residual " + buf;
      }
    }
  }

  const std::string& first_failure() const { return first_; }

 private:
  std::vector<CheckSummary>& checks_;
  std::string first_;
};

double max_abs_diff(const FieldTable& a, const FieldTable& b) {
  double m = 0.0;
  for (std::size_t w = 0; w < a.size(); ++w) m = std::max(m, std::abs(a[w] - b[w]));
  return m;
}

double max_abs(const FieldTable& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

FieldTable map_table(const FieldTable& f, double (*op)(double)) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = op(x);
  return FieldTable(f.space_ptr(), std::move(v), f.constant_coords());
}

// Largest amount by which consecutive entries of a chain decrease.
double chain_violation(std::initializer_list<double> chain) {
  double worst = 0.0;
  const double* prev = nullptr;
  for (const double& v : chain) {
    if (prev) worst = std::max(worst, *prev - v);
    prev = &v;
  }
  return worst;
}

std::string group_name(const std::string& entry) {
  const auto cut = entry.find(" [");
  return cut == std::string::npos ? entry : entry.substr(0, cut);
}

}  // namespace

InstanceConfig random_instance(SplitMix64& rng, const InstanceSpec& spec) {
  auto between = [&](int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); };
  InstanceConfig cfg;
  const int n = between(spec.min_n, spec.max_n);
  for (int i = 0; i < n; ++i) {
    if (rng.uniform() < spec.point_mass_rate) {
      cfg.distributions.push_back(DiscreteDistribution::point_mass(4.0 * rng.uniform() - 2.0));
      continue;
    }
    const int r = between(spec.min_support, spec.max_support);
    std::vector<double> support(static_cast<std::size_t>(r));
    std::vector<double> weights(support.size());
    for (auto& x : support) x = 4.0 * rng.uniform() - 2.0;
    std::sort(support.begin(), support.end());
    for (auto& w : weights) w = rng.uniform() + 1e-3;
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double free_mass = 1.0 - static_cast<double>(r) * spec.min_prob;
    std::vector<double> probs(support.size());
    for (std::size_t d = 0; d < probs.size(); ++d) probs[d] = spec.min_prob + free_mass * weights[d] / total;
    cfg.distributions.emplace_back(std::move(support), std::move(probs));
  }
  std::size_t outcomes = 1;
  for (const auto& d : cfg.distributions) outcomes *= d.size();
  std::vector<double> values(outcomes);
  if (rng.uniform() < spec.constant_rate) {
    std::fill(values.begin(), values.end(), 2.0 * rng.uniform() - 1.0);
  } else {
    for (auto& v : values) v = 2.0 * rng.uniform() - 1.0;
  }
  cfg.statistic = Statistic::table(std::move(values));
  return cfg;
}

InstanceConfig random_instance(std::uint64_t seed, std::size_t index, const InstanceSpec& spec) {
  SplitMix64 rng = SplitMix64::stream(seed, 0x5e1fc4ecULL, index);
  return random_instance(rng, spec);
}

std::string check_instance(const InstanceConfig& instance, std::vector<CheckSummary>& checks,
                           const std::function<void(JackknifeSpectrum&)>& tamper) {
  Tally t(checks);
  try {
    const SpacePtr space = build_space(instance.distributions);
    const CondExpCache cache(tabulate(instance.statistic, space));
    const int n = cache.dimension();
    const double scale = cache.scale();
    const FieldTable& S = cache.base();
    const double var = variance(S);
    auto rel = [&](double r) { return std::abs(r) / scale; };

    JackknifeSpectrum jack = jackknife_spectrum(cache);
    if (tamper) tamper(jack);
    const HoeffdingDecomposition hd = hoeffding_decompose(cache);

    // Exact expansions of Var S, spectrum correspondences and the R recursion.
    for (const auto& e : variance_identities(var, jack, scale).entries) t.record(e.name, rel(e.value), kIdentityTol);
    for (const auto& e : lemma_check(hd.spectrum, jack, scale).entries) {
      t.record("spectrum: " + group_name(e.name), rel(e.value), kIdentityTol);
    }
    for (const auto& e : proof_recursion_check(var, jack, scale).entries) {
      t.record("recursion: " + group_name(e.name), rel(e.value), kIdentityTol);
    }

    // Two-index decomposition and commutation.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const IndexSet ij{i, j};
        const FieldTable& Eij = cache.cond_expect(ij);
        std::vector<double> dev(S.size());
        for (std::size_t w = 0; w < dev.size(); ++w) dev[w] = (S[w] - Eij[w]) * (S[w] - Eij[w]);
        const FieldTable cond_var = integrate_out(FieldTable(space, std::move(dev)), ij);
        auto var_i_of = [&](int a, int b) {
          // Var^(a) E^(b) S = E^(a)(E^(b)S)^2 - (E^(ab)S)^2
          const FieldTable sq = integrate_out(map_table(cache.cond_expect(IndexSet{b}), [](double x) { return x * x; }), a);
          std::vector<double> v(sq.size());
          for (std::size_t w = 0; w < v.size(); ++w) v[w] = sq[w] - Eij[w] * Eij[w];
          return FieldTable(space, std::move(v));
        };
        const FieldTable vi = var_i_of(i, j);
        const FieldTable vj = var_i_of(j, i);
        const FieldTable vij = iterated_variance(cache, ij);
        double worst = 0.0;
        for (std::size_t w = 0; w < S.size(); ++w) {
          worst = std::max(worst, std::abs(vij[w] - (cond_var[w] - vi[w] - vj[w])));
        }
        t.record("two-index decomposition", rel(worst), kIdentityTol);

        const FieldTable swapped = integrate_out(integrate_out(S, j), i);
        t.record("commutation", rel(max_abs_diff(swapped, Eij)), kCommuteTol);
      }
    }

    // Per index set: recursion vs inclusion-exclusion, order irrelevance,
    // iterated differences, Hoeffding tail sums, convexity, projections.
    SplitMix64 shuffle = SplitMix64::stream(0, 0x0dde4ULL, IndexSet::full(n).mask() ^ S.size());
    for (IndexSet::Mask m = 1; m < (IndexSet::Mask{1} << n); ++m) {
      const IndexSet I = IndexSet::from_mask(m);
      const FieldTable rec = iterated_variance(cache, I);
      t.record("recursion vs inclusion-exclusion", rel(max_abs_diff(rec, iterated_variance_ie(cache, I))), kIdentityTol);

      auto order = I.indices();
      std::shuffle(order.begin(), order.end(), shuffle);
      t.record("order irrelevance", rel(max_abs_diff(rec, iterated_variance_ordered(cache, order))), kIdentityTol);

      const double ev = expectation(rec);
      t.record("scalar vs table E Var^(I)", rel(ev - expected_iterated_variance(cache, I)), kIdentityTol);

      const double idm = iterated_difference_moment(S, I);
      t.record("iterated differences", rel(idm / std::ldexp(1.0, I.size()) - ev), kIdentityTol);

      double tail = 0.0;
      for (const auto& [mask, h] : hd.components) {
        if (I.is_subset_of(IndexSet::from_mask(mask))) tail += second_moment(h);
      }
      t.record("E Var^(I) = sum_{J>=I} E h_J^2", rel(ev - tail), kIdentityTol);

      // E^(1..i1-1) Var^(I) S >= Var^(I) E^(1..i1-1) S pointwise.
      const IndexSet prefix = IndexSet::prefix(I.min());
      if (!prefix.empty()) {
        const CondExpCache shifted(cache.cond_expect(prefix));
        const FieldTable lhs = integrate_out(rec, prefix);
        const FieldTable rhs = iterated_variance(shifted, I);
        double worst = 0.0;
        for (std::size_t w = 0; w < lhs.size(); ++w) worst = std::max(worst, rhs[w] - lhs[w]);
        t.record("convexity", rel(worst), kInequalityTol);
      }

      // E^(complement I) S = E S + sum_{J subset I} h_J
      std::vector<double> proj(S.size(), hd.mean);
      for_each_subset(I, [&](IndexSet J) {
        if (J.empty()) return;
        const FieldTable& h = hd.component(J);
        for (std::size_t w = 0; w < proj.size(); ++w) proj[w] += h[w];
      });
      t.record("marginal projection",
               rel(max_abs_diff(cache.cond_expect(I.complement(n)), FieldTable(space, std::move(proj)))), kIdentityTol);

      // Hoeffding degeneracy and support.
      const FieldTable& h = hd.component(I);
      double degenerate = 0.0;
      for (int s : I.indices()) degenerate = std::max(degenerate, max_abs(integrate_out(h, s)));
      t.record("hoeffding degeneracy", rel(degenerate), kIdentityTol);
      t.record("hoeffding support", rel(max_abs_diff(h, integrate_out(h, I.complement(n)))), kIdentityTol);
    }

    // Hoeffding orthogonality, completeness, reconstruction.
    double cross = 0.0;
    for (auto a = hd.components.begin(); a != hd.components.end(); ++a) {
      for (auto b = std::next(a); b != hd.components.end(); ++b) {
        std::vector<double> prod(S.size());
        for (std::size_t w = 0; w < prod.size(); ++w) prod[w] = a->second[w] * b->second[w];
        cross = std::max(cross, std::abs(expectation(FieldTable(space, std::move(prod)))));
      }
    }
    t.record("hoeffding orthogonality", rel(cross), kIdentityTol);
    t.record("hoeffding completeness", rel(var - std::accumulate(hd.spectrum.begin(), hd.spectrum.end(), 0.0)), kIdentityTol);
    std::vector<double> rebuilt(S.size(), hd.mean);
    for (const auto& [mask, comp] : hd.components) {
      for (std::size_t w = 0; w < rebuilt.size(); ++w) rebuilt[w] += comp[w];
    }
    t.record("hoeffding reconstruction", rel(max_abs_diff(S, FieldTable(space, std::move(rebuilt)))), kIdentityTol);

    // Inequalities.
    double bracket_worst = 0.0;
    for (int p = 1; 2 * p <= n; ++p) {
      const Bracket b = partial_sum_bracket(jack, p);
      bracket_worst = std::max(bracket_worst, chain_violation({b.lower_J, b.lower_JK, var, b.upper_JK, b.upper_J}));
    }
    t.record("bracket ordering", rel(bracket_worst), kInequalityTol);
    const P0Chain c = p0_chain(var, jack);
    t.record("p=0 chains", rel(std::max(chain_violation({0.0, c.EK1, c.var, c.EJ1}),
                                        chain_violation({0.0, c.half_EK2, c.bias, c.half_EJ2}))),
             kInequalityTol);
    double order_worst = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double kR = static_cast<double>(factorial(k)) * jack.R(k);
      order_worst = std::max(order_worst, chain_violation({0.0, jack.K(k), kR, jack.J(k)}));
    }
    t.record("EK_k <= k! ER_k <= EJ_k", rel(order_worst), kInequalityTol);

    (void)degree_bound(hd.spectrum, jack, var, scale);
  } catch (const ConsistencyError& e) {
    t.record("internal consistency", std::numeric_limits<double>::infinity(), 0.0);
    return std::string("internal consistency: ") + e.what();
  }
  return t.first_failure();
}

SelfcheckResult run_selfcheck(const SelfcheckOptions& options) {
  SelfcheckResult result;
  result.instances = options.instances;
  for (std::size_t i = 0; i < options.instances; ++i) {
    InstanceConfig inst = random_instance(options.seed, i, options.spec);
    std::string detail = check_instance(inst, result.checks, options.tamper);
    if (!detail.empty() && !result.first_failure) {
      result.first_failure = i;
      result.failing_instance = std::move(inst);
      result.failure_detail = std::move(detail);
    }
  }
  return result;
}

int selfcheck(const SelfcheckOptions& options, std::ostream& out, std::ostream& err) {
  const SelfcheckResult result = run_selfcheck(options);
  char line[256];
  std::snprintf(line, sizeof line, "%-40s %14s %10s %8s\n", "check", "max residual", "tolerance", "status");
  out << "selfcheck: " << result.instances << " instances, seed " << options.seed << "\n" << line;
  for (const auto& c : result.checks) {
    std::snprintf(line, sizeof line, "%-40s %14.3e %10.0e %8s\n", c.name.c_str(), c.max_residual, c.tolerance,
                  c.failures == 0 ? "ok" : "FAIL");
    out << line;
  }
  if (result.ok()) {
    out << "all checks passed\n";
    return 0;
  }
  err << "selfcheck failed on instance " << *result.first_failure << ": " << result.failure_detail << '\n';
  std::ofstream f(options.failure_path);
  if (f) {
    f << to_json(*result.failing_instance).dump(2) << '\n';
    err << "failing instance written to " << options.failure_path.string() << '\n';
  } else {
    err << "could not write " << options.failure_path.string() << '\n';
  }
  return 2;
}

}  // namespace ijack::cli
