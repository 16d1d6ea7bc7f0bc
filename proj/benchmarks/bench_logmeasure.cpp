#include <benchmark/benchmark.h>

#include "chowla/logmeasure.hpp"
#include "chowla/multfunc.hpp"

namespace {

// Cost of the normalizer scan alone: one pass of compensated 1/n sums over
// the window (x/omega, x].
void BM_make_log_window(benchmark::State& state) {
    const std::uint64_t x = static_cast<std::uint64_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto w = chowla::make_log_window(x, 1'000.0, threads);
        benchmark::DoNotOptimize(w.Z);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(x - x / 1000));
}
BENCHMARK(BM_make_log_window)
    ->Args({10'000'000, 1})
    ->Args({10'000'000, 4})
    ->Args({100'000'000, 1})
    ->Args({100'000'000, 4});

// The workhorse: sieve-backed two-point correlation, dominated by the two
// sign windows per segment.
void BM_correlation2_liouville(benchmark::State& state) {
    const std::uint64_t x = static_cast<std::uint64_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    auto w = chowla::make_log_window(x, 1'000.0, threads);
    auto g = chowla::MultSpec::liouville();
    for (auto _ : state) {
        auto r = chowla::correlation2(g, g, {1, 0, 1}, w, threads);
        benchmark::DoNotOptimize(r.raw);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_correlation2_liouville)
    ->Args({10'000'000, 1})
    ->Args({10'000'000, 4})
    ->Args({100'000'000, 4});

// Twist pairs skip the sieve entirely; the cost is one polar evaluation per n.
void BM_correlation2_twist(benchmark::State& state) {
    const std::uint64_t x = static_cast<std::uint64_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    auto w = chowla::make_log_window(x, 1'000.0, threads);
    auto g1 = chowla::MultSpec::archimedean_twist(1.0);
    auto g2 = chowla::MultSpec::archimedean_twist(-1.0);
    for (auto _ : state) {
        auto r = chowla::correlation2(g1, g2, {1, 0, 1}, w, threads);
        benchmark::DoNotOptimize(r.raw);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_correlation2_twist)->Args({10'000'000, 1})->Args({10'000'000, 4});

// Pattern tally over the same window; k widens the per-n work and the bin
// count (3^k) but not the sieve cost.
void BM_sign_pattern_density(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    auto w = chowla::make_log_window(10'000'000, 1'000.0, threads);
    auto g = chowla::MultSpec::liouville();
    for (auto _ : state) {
        auto t = chowla::sign_pattern_density(g, k, w, threads);
        benchmark::DoNotOptimize(t.density[0]);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_sign_pattern_density)->Args({2, 4})->Args({4, 4})->Args({8, 4});

void BM_affine_invariance_check(benchmark::State& state) {
    const int threads = static_cast<int>(state.range(0));
    auto w = chowla::make_log_window(10'000'000, 1'000.0, threads);
    auto one = [](std::uint64_t) { return chowla::cplx{1.0, 0.0}; };
    for (auto _ : state) {
        auto r = chowla::affine_invariance_check(w, 3, 1, threads, one);
        benchmark::DoNotOptimize(r.gap);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(w.size()) * 2);
}
BENCHMARK(BM_affine_invariance_check)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
