#include "logdet/detcore.hpp"
#include "logdet/ensemble.hpp"
#include "logdet/gaussmodel.hpp"
#include "logdet/girko.hpp"
#include "logdet/resolvent.hpp"

#include <benchmark/benchmark.h>

using namespace logdet;

namespace {

void BM_SampleMatrix(benchmark::State& state) {
  const Index n = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_matrix({n, StandardGaussian{}, ++seed}));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SampleMatrix)->RangeMultiplier(4)->Range(16, 1024);

void BM_LogAbsDet(benchmark::State& state) {
  const auto a = sample_matrix({state.range(0), StandardGaussian{}, 1});
  for (auto _ : state) benchmark::DoNotOptimize(log_abs_det(a));
}
BENCHMARK(BM_LogAbsDet)->RangeMultiplier(4)->Range(16, 1024);

void BM_PerpendicularLengths(benchmark::State& state) {
  const auto a = sample_matrix({state.range(0), StandardGaussian{}, 1});
  for (auto _ : state) benchmark::DoNotOptimize(perpendicular_lengths(a));
}
BENCHMARK(BM_PerpendicularLengths)->RangeMultiplier(4)->Range(16, 1024);

void BM_FullDecomposition(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = sample_matrix({n, StandardGaussian{}, 1});
  const Index s1 = default_s1(n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(full_decomposition(a, s1));
}
BENCHMARK(BM_FullDecomposition)->RangeMultiplier(4)->Range(16, 1024);

// The product model is O(n) per draw; compare with BM_LogAbsDet at the same n.
void BM_ChiSquareProduct(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(chi_square_product_log_det(state.range(0), ++seed));
}
BENCHMARK(BM_ChiSquareProduct)->RangeMultiplier(4)->Range(16, 1024);

void BM_ResolventTrace(benchmark::State& state) {
  const Index n = state.range(0);
  const auto x = sample_prefix({n, Rademacher{}, 1}, (9 * n) / 10);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_trace(x, default_alpha(n)));
}
BENCHMARK(BM_ResolventTrace)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
