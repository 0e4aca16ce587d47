#include <benchmark/benchmark.h>

#include "ijack/ijack.hpp"

namespace {

ijack::FieldTable ustat_table(int n) {
  auto space = ijack::build_space(std::vector<ijack::DiscreteDistribution>(
      static_cast<std::size_t>(n), ijack::DiscreteDistribution({0.0, 1.0, 2.5}, {0.3, 0.5, 0.2})));
  return ijack::tabulate(ijack::Statistic::ustat2(), space);
}

void BM_ConditionalTables(benchmark::State& state) {
  const ijack::FieldTable base = ustat_table(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ijack::CondExpCache cache(base);
    const auto full = ijack::IndexSet::full(cache.dimension());
    ijack::for_each_subset(full, [&](ijack::IndexSet I) { benchmark::DoNotOptimize(cache.cond_expect(I)); });
  }
}
BENCHMARK(BM_ConditionalTables)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_JackknifeSpectrum(benchmark::State& state) {
  const ijack::FieldTable base = ustat_table(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ijack::CondExpCache cache(base);
    benchmark::DoNotOptimize(ijack::jackknife_spectrum(cache));
  }
}
BENCHMARK(BM_JackknifeSpectrum)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_BoundsReport(benchmark::State& state) {
  const ijack::FieldTable base = ustat_table(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ijack::CondExpCache cache(base);
    benchmark::DoNotOptimize(ijack::build_bounds_report(cache));
  }
}
BENCHMARK(BM_BoundsReport)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_IteratedVariance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ijack::CondExpCache cache(ustat_table(n));
  const auto full = ijack::IndexSet::full(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ijack::iterated_variance(cache, full));
    benchmark::DoNotOptimize(ijack::iterated_variance_ie(cache, full));
  }
}
BENCHMARK(BM_IteratedVariance)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace
