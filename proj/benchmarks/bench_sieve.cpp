#include <benchmark/benchmark.h>

#include "chowla/sieve.hpp"

namespace {

// Sign-window throughput at a fixed 1e6 start, spans from 2^20 to 2^26.
// items_processed makes the per-value rate comparable across spans.
void BM_liouville_window(benchmark::State& state) {
    const std::uint64_t lo = 1'000'000;
    const std::uint64_t span = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto w = chowla::liouville_window(lo, lo + span);
        benchmark::DoNotOptimize(w.get(lo));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(span));
}
BENCHMARK(BM_liouville_window)->RangeMultiplier(8)->Range(1 << 20, 1 << 26);

void BM_mobius_window(benchmark::State& state) {
    const std::uint64_t lo = 1'000'000;
    const std::uint64_t span = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto w = chowla::mobius_window(lo, lo + span);
        benchmark::DoNotOptimize(w.get(lo));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(span));
}
BENCHMARK(BM_mobius_window)->RangeMultiplier(8)->Range(1 << 20, 1 << 26);

// Thread scaling on a fixed 2^26 span; compare rows to see the speedup.
void BM_liouville_window_threads(benchmark::State& state) {
    const std::uint64_t lo = 100'000'000;
    const std::uint64_t span = 1ull << 26;
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto w = chowla::liouville_window(lo, lo + span, threads);
        benchmark::DoNotOptimize(w.get(lo));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(span));
}
BENCHMARK(BM_liouville_window_threads)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

// Far-window cost: the same span sieved high up, where the prime tables for
// sqrt(hi) dominate less and cache behaviour changes.
void BM_liouville_window_high(benchmark::State& state) {
    const std::uint64_t lo = 99'000'000'000ull;
    const std::uint64_t span = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto w = chowla::liouville_window(lo, lo + span);
        benchmark::DoNotOptimize(w.get(lo));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(span));
}
BENCHMARK(BM_liouville_window_high)->RangeMultiplier(8)->Range(1 << 20, 1 << 23);

void BM_primes_in(benchmark::State& state) {
    const std::uint64_t lo = 1'000'000'000;
    const std::uint64_t span = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto p = chowla::primes_in(lo, lo + span);
        benchmark::DoNotOptimize(p.primes.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(span));
}
BENCHMARK(BM_primes_in)->RangeMultiplier(8)->Range(1 << 20, 1 << 26);

void BM_primes_upto(benchmark::State& state) {
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto p = chowla::primes_upto(n);
        benchmark::DoNotOptimize(p.size());
    }
}
BENCHMARK(BM_primes_upto)->Arg(1'000'000)->Arg(10'000'000);

}  // namespace

BENCHMARK_MAIN();
