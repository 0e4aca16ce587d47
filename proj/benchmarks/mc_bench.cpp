#include <benchmark/benchmark.h>

#include "ijack/ijack.hpp"

namespace {

ijack::ProductSpace signs(int n) {
  return ijack::ProductSpace(
      std::vector<ijack::DiscreteDistribution>(static_cast<std::size_t>(n), ijack::DiscreteDistribution::rademacher()),
      ijack::kUnboundedOutcomes);
}

ijack::McConfig config(unsigned threads) {
  ijack::McConfig cfg;
  cfg.seed = 1;
  cfg.outer_samples = 2000;
  cfg.threads = threads;
  return cfg;
}

// n = 40 is far beyond enumeration; subsets are sampled.
void BM_EstimateEJ(benchmark::State& state) {
  const auto space = signs(40);
  const auto stat = ijack::Statistic::ustat2();
  const auto cfg = config(static_cast<unsigned>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ijack::estimate_EJ(space, stat, static_cast<int>(state.range(0)), cfg));
}
BENCHMARK(BM_EstimateEJ)->ArgsProduct({{1, 2, 4}, {1, 2}})->Unit(benchmark::kMillisecond);

void BM_EstimateEK(benchmark::State& state) {
  const auto space = signs(40);
  const auto stat = ijack::Statistic::ustat2();
  const auto cfg = config(1);
  for (auto _ : state) benchmark::DoNotOptimize(ijack::estimate_EK(space, stat, static_cast<int>(state.range(0)), cfg));
}
BENCHMARK(BM_EstimateEK)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
