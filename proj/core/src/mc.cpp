#include "ijack/mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "ijack/combinatorics.hpp"
#include "ijack/jackknife.hpp"

namespace ijack {

namespace {

// Stream tags: estimator id in the high word, order k in the low word.
enum class Purpose : std::uint64_t { ej = 1, ek = 2, variance = 3, es_bias = 4, difference = 5 };

constexpr std::uint64_t tag(Purpose p, std::uint64_t detail) { return (static_cast<std::uint64_t>(p) << 48) ^ detail; }

using Contribution = std::function<double(SplitMix64&)>;

// Fills one contribution per sample index (possibly across threads), then
// reduces in index order.
McEstimate run_samples(const McConfig& cfg, std::uint64_t stream_tag, const Contribution& contribution) {
  cfg.validate();
  const std::size_t m = cfg.outer_samples;
  std::vector<double> values(m);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      SplitMix64 rng = SplitMix64::stream(cfg.seed, stream_tag, j);
      values[j] = contribution(rng);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, m);
  if (workers == 1) {
    work(0, m);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (m + workers - 1) / workers;
    for (std::size_t b = 0; b < m; b += chunk) pool.emplace_back(work, b, std::min(m, b + chunk));
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  return McEstimate{mean, sd / std::sqrt(static_cast<double>(m)), m, mean < 0.0};
}

bool enumerate_subsets(const McConfig& cfg, int n, int k) {
  switch (cfg.subset_mode) {
    case SubsetMode::enumerate: return true;
    case SubsetMode::sample: return false;
    case SubsetMode::automatic: return binomial(n, k) <= 64;
  }
  return true;
}

void check_order(const ProductSpace& space, int k) {
  if (k < 1 || k > space.dimension()) {
    throw std::out_of_range("order k = " + std::to_string(k) + " outside [1, " + std::to_string(space.dimension()) + "]");
  }
}

// Uniform k-subset of {0..n-1} by sequential selection.
IndexSet random_subset(int n, int k, SplitMix64& rng) {
  IndexSet s;
  int needed = k;
  for (int i = 0; i < n && needed > 0; ++i) {
    if (rng.below(static_cast<std::uint64_t>(n - i)) < static_cast<std::uint64_t>(needed)) {
      s = s.with(i);
      --needed;
    }
  }
  return s;
}

void draw_into(const ProductSpace& space, SplitMix64& rng, std::vector<std::size_t>& digits) {
  for (int i = 0; i < space.dimension(); ++i) digits[static_cast<std::size_t>(i)] = space.marginal(i).digit_for(rng.uniform());
}

// sum_{J subset I} (-1)^{|J|} S(x with coordinates in J taken from copy)
double iterated_difference(const ProductSpace& space, const Statistic& statistic, IndexSet I,
                           const std::vector<std::size_t>& x, const std::vector<std::size_t>& copy,
                           std::vector<std::size_t>& scratch) {
  double d = 0.0;
  for_each_subset(I, [&](IndexSet J) {
    scratch = x;
    for (int i : J.indices()) scratch[static_cast<std::size_t>(i)] = copy[static_cast<std::size_t>(i)];
    d += (J.size() % 2 == 0 ? 1.0 : -1.0) * statistic.evaluate(space, scratch);
  });
  return d;
}

void prepare(const ProductSpace& space, const Statistic& statistic, const McConfig& cfg) {
  cfg.validate();
  statistic.validate(space);
}

}  // namespace

void McConfig::validate() const {
  if (outer_samples < 2) throw std::invalid_argument("outer_samples must be at least 2");
  if (inner_pairs < 1) throw std::invalid_argument("inner_pairs must be at least 1");
}

std::vector<std::size_t> sample_outcome(const ProductSpace& space, SplitMix64& rng) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(space.dimension()));
  draw_into(space, rng, digits);
  return digits;
}

McEstimate estimate_EJ(const ProductSpace& space, const Statistic& statistic, int k, const McConfig& cfg) {
  check_order(space, k);
  prepare(space, statistic, cfg);
  const int n = space.dimension();
  const bool all = enumerate_subsets(cfg, n, k);
  const double per_subset = static_cast<double>(factorial(k)) / std::ldexp(1.0, k);
  const double sampled_weight = per_subset * static_cast<double>(binomial(n, k));
  return run_samples(cfg, tag(Purpose::ej, static_cast<std::uint64_t>(k)), [&](SplitMix64& rng) {
    std::vector<std::size_t> x(static_cast<std::size_t>(n)), copy(x.size()), scratch(x.size());
    draw_into(space, rng, x);
    draw_into(space, rng, copy);
    if (!all) {
      const double d = iterated_difference(space, statistic, random_subset(n, k, rng), x, copy, scratch);
      return sampled_weight * d * d;
    }
    double sum = 0.0;
    for_each_k_subset(n, k, [&](IndexSet I) {
      const double d = iterated_difference(space, statistic, I, x, copy, scratch);
      sum += d * d;
    });
    return per_subset * sum;
  });
}

McEstimate estimate_EK(const ProductSpace& space, const Statistic& statistic, int k, const McConfig& cfg) {
  check_order(space, k);
  prepare(space, statistic, cfg);
  const int n = space.dimension();
  const bool all = enumerate_subsets(cfg, n, k);
  const double kf = static_cast<double>(factorial(k));
  const double sampled_weight = kf * static_cast<double>(binomial(n, k));
  const std::size_t pairs = cfg.inner_pairs;

  auto component_moment = [&](IndexSet I, const std::vector<std::size_t>& x, SplitMix64& rng,
                              std::vector<std::size_t>& a, std::vector<std::size_t>& b) {
    double acc = 0.0;
    for_each_subset(I, [&](IndexSet J) {
      double products = 0.0;
      for (std::size_t q = 0; q < pairs; ++q) {
        draw_into(space, rng, a);
        draw_into(space, rng, b);
        for (int i : J.indices()) {
          a[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
          b[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        }
        products += statistic.evaluate(space, a) * statistic.evaluate(space, b);
      }
      acc += ((I.size() - J.size()) % 2 == 0 ? 1.0 : -1.0) * products / static_cast<double>(pairs);
    });
    return acc;
  };

  McEstimate est = run_samples(cfg, tag(Purpose::ek, static_cast<std::uint64_t>(k)), [&](SplitMix64& rng) {
    std::vector<std::size_t> x(static_cast<std::size_t>(n)), a(x.size()), b(x.size());
    draw_into(space, rng, x);
    if (!all) return sampled_weight * component_moment(random_subset(n, k, rng), x, rng, a, b);
    double sum = 0.0;
    for_each_k_subset(n, k, [&](IndexSet I) { sum += component_moment(I, x, rng, a, b); });
    return kf * sum;
  });
  return est;
}

McEstimate estimate_variance(const ProductSpace& space, const Statistic& statistic, const McConfig& cfg) {
  prepare(space, statistic, cfg);
  return run_samples(cfg, tag(Purpose::variance, 0), [&](SplitMix64& rng) {
    const auto y = sample_outcome(space, rng);
    const auto z = sample_outcome(space, rng);
    const double d = statistic.evaluate(space, y) - statistic.evaluate(space, z);
    return 0.5 * d * d;
  });
}

McEstimate estimate_difference_moment(const ProductSpace& space, const Statistic& statistic, IndexSet I,
                                      const McConfig& cfg) {
  if (I.empty()) throw std::invalid_argument("iterated difference needs a nonempty index set");
  I.check_within(space.dimension());
  prepare(space, statistic, cfg);
  return run_samples(cfg, tag(Purpose::difference, I.mask()), [&](SplitMix64& rng) {
    std::vector<std::size_t> x = sample_outcome(space, rng);
    std::vector<std::size_t> copy = sample_outcome(space, rng);
    std::vector<std::size_t> scratch(x.size());
    const double d = iterated_difference(space, statistic, I, x, copy, scratch);
    return d * d;
  });
}

EstimatedBracket estimate_bracket(const ProductSpace& space, const Statistic& statistic, int p, const McConfig& cfg) {
  const int n = space.dimension();
  if (p < 1 || 2 * p > n) {
    throw std::out_of_range("bracket depth p = " + std::to_string(p) + " outside [1, " + std::to_string(n / 2) + "]");
  }
  struct Acc {
    double mean = 0.0;
    double var = 0.0;
    void add(double c, const McEstimate& e) {
      mean += c * e.mean;
      var += c * c * e.std_error * e.std_error;
    }
    McEstimate done(std::size_t samples) const { return {mean, std::sqrt(var), samples, false}; }
  };

  Acc upper;
  Acc lower;
  for (int k = 1; k <= 2 * p; ++k) {
    const McEstimate ej = estimate_EJ(space, statistic, k, cfg);
    const double c = ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(factorial(k));
    lower.add(c, ej);
    if (k <= 2 * p - 1) upper.add(c, ej);
  }
  Acc upper_jk = upper;
  upper_jk.add(-1.0 / static_cast<double>(factorial(2 * p)), estimate_EK(space, statistic, 2 * p, cfg));
  Acc lower_jk = lower;
  if (2 * p + 1 <= n) {
    lower_jk.add(1.0 / static_cast<double>(factorial(2 * p + 1)), estimate_EK(space, statistic, 2 * p + 1, cfg));
  }
  const std::size_t m = cfg.outer_samples;
  return EstimatedBracket{p, lower.done(m), lower_jk.done(m), upper_jk.done(m), upper.done(m)};
}

McEstimate mc_efron_stein_bias(const ProductSpace& space, const Statistic& statistic, const McConfig& cfg) {
  prepare(space, statistic, cfg);
  if (!space.is_iid()) throw std::invalid_argument("the classical jackknife bias needs identically distributed coordinates");
  const int n = space.dimension();

  // Permutation spot check: 32 random outcomes under a random transposition.
  SplitMix64 check = SplitMix64::stream(cfg.seed, tag(Purpose::es_bias, 1), 0);
  for (int t = 0; t < 32 && n > 1; ++t) {
    auto x = sample_outcome(space, check);
    const double before = statistic.evaluate(space, x);
    const auto a = check.below(static_cast<std::uint64_t>(n));
    const auto b = check.below(static_cast<std::uint64_t>(n));
    std::swap(x[a], x[b]);
    const double after = statistic.evaluate(space, x);
    if (std::abs(before - after) > 1e-12 * std::max(1.0, std::abs(before))) {
      throw std::invalid_argument("statistic is not symmetric under permutation of its arguments");
    }
  }

  return run_samples(cfg, tag(Purpose::es_bias, 0), [&](SplitMix64& rng) {
    const auto x = sample_outcome(space, rng);
    const std::size_t extra = space.marginal(0).digit_for(rng.uniform());
    std::vector<double> resampled(static_cast<std::size_t>(n) + 1);
    std::vector<std::size_t> scratch;
    scratch.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      scratch.clear();
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != i) scratch.push_back(x[j]);
      }
      scratch.push_back(extra);
      resampled[i] = statistic.evaluate(space, scratch);
    }
    resampled[x.size()] = statistic.evaluate(space, x);
    const auto y = sample_outcome(space, rng);
    const auto z = sample_outcome(space, rng);
    const double d = statistic.evaluate(space, y) - statistic.evaluate(space, z);
    return classical_jackknife(resampled) - 0.5 * d * d;
  });
}

}  // namespace ijack
