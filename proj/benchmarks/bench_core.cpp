#include <benchmark/benchmark.h>

#include "regseq/kernels.hpp"
#include "regseq/maximal.hpp"

using namespace regseq;

namespace {

SequenceFamily canonical() { return SequenceFamily::regular(RegularFn::x_log_x()); }

void BM_FloorH(benchmark::State& state) {
  const RegularFn h = RegularFn::x_log_x();
  std::int64_t m = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(floor_h(h, m));
    if (++m > 1000000) m = 1000;
  }
}
BENCHMARK(BM_FloorH);

void BM_EnumerateB(benchmark::State& state) {
  const auto fam = canonical();
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_B(fam, 0, n).count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fam.phi(static_cast<double>(n))));
}
BENCHMARK(BM_EnumerateB)->RangeMultiplier(16)->Range(1 << 12, 1 << 24)->Unit(benchmark::kMillisecond);

void BM_EnumerateControl(benchmark::State& state) {
  const auto fam = SequenceFamily::rosenblatt();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_B(fam, 0, state.range(0)).count());
}
BENCHMARK(BM_EnumerateControl)->RangeMultiplier(16)->Range(1 << 12, 1 << 24)->Unit(benchmark::kMillisecond);

void BM_AutocorrDirect(benchmark::State& state) {
  const Kernel k = build_kernel(canonical(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(autocorr_direct(k).pair_counts.data());
}
BENCHMARK(BM_AutocorrDirect)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMillisecond);

void BM_PaircountInterval(benchmark::State& state) {
  const RegularFn h = RegularFn::x_log_x();
  const std::int64_t n = state.range(0);
  const std::int64_t x = static_cast<std::int64_t>(h.derivative_unchecked(inverse_phi(h, static_cast<double>(n))));
  for (auto _ : state) benchmark::DoNotOptimize(paircount_interval(h, n, x));
}
BENCHMARK(BM_PaircountInterval)->RangeMultiplier(16)->Range(1 << 10, 1 << 22)->Unit(benchmark::kMicrosecond);

void BM_MaximalDelta(benchmark::State& state) {
  const int j_max = static_cast<int>(state.range(0));
  const WindowB prefix = enumerate_B(canonical(), 0, std::int64_t{1} << j_max);
  const SignalF f = delta_signal();
  for (auto _ : state) benchmark::DoNotOptimize(maximal_fn(prefix, ScaleSet::dyadic(3, j_max), f).size());
}
BENCHMARK(BM_MaximalDelta)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_MaximalRandom(benchmark::State& state) {
  const int j_max = static_cast<int>(state.range(0));
  const WindowB prefix = enumerate_B(canonical(), 0, std::int64_t{1} << j_max);
  const SignalF f = random_signal(7);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_fn(prefix, ScaleSet::dyadic(3, j_max), f).size());
}
BENCHMARK(BM_MaximalRandom)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
