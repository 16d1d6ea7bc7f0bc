#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "chowla/circle.hpp"
#include "chowla/graphmodel.hpp"
#include "chowla/multfunc.hpp"

namespace {

chowla::PrimeWindow window_at(std::uint64_t H) {
    return chowla::PrimeWindow::build(chowla::MultSpec::liouville(),
                                      chowla::MultSpec::liouville(), 0.5, H, {1, 0, 1});
}

// Direct summation below the 2^16 grid cutoff, sparse FFT above; the jump in
// per-point cost between the two regimes is the point of this sweep.
void BM_fourth_moment(benchmark::State& state) {
    const std::uint64_t H = static_cast<std::uint64_t>(state.range(0));
    auto pw = window_at(H);
    for (auto _ : state) {
        double v = chowla::fourth_moment(pw, 1, H);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(H));
}
BENCHMARK(BM_fourth_moment)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 16)->Arg(1 << 18)->Arg(1 << 20);

void BM_fourth_moment_quadruple(benchmark::State& state) {
    const std::uint64_t H = static_cast<std::uint64_t>(state.range(0));
    auto pw = window_at(H);
    for (auto _ : state) {
        double v = chowla::fourth_moment_quadruple(pw, 1, H);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_fourth_moment_quadruple)->Arg(1 << 10)->Arg(1 << 12)->Arg(5000);

void BM_large_value_set(benchmark::State& state) {
    const std::uint64_t H = static_cast<std::uint64_t>(state.range(0));
    auto pw = window_at(H);
    for (auto _ : state) {
        auto xi = chowla::large_value_set(pw, H);
        benchmark::DoNotOptimize(xi.members.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(H));
}
BENCHMARK(BM_large_value_set)->Arg(200)->Arg(1600)->Arg(10'000);

void BM_dft_coeffs(benchmark::State& state) {
    const std::size_t H = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<chowla::cplx> x(H);
    for (auto& v : x) v = {u(rng), u(rng)};
    for (auto _ : state) {
        auto g = chowla::dft_coeffs(x);
        benchmark::DoNotOptimize(g.G[0]);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(H));
}
BENCHMARK(BM_dft_coeffs)->Arg(64)->Arg(1024)->Arg(16'384);

// End-to-end sup scan: sieve the range, window it, transform every start.
void BM_maximal_short_exp_sum(benchmark::State& state) {
    const std::uint64_t H = static_cast<std::uint64_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    auto g = chowla::MultSpec::liouville();
    for (auto _ : state) {
        double v = chowla::maximal_short_exp_sum(g, 1'000'000, H, 4, threads);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_maximal_short_exp_sum)->Args({1024, 1})->Args({1024, 4})->Args({8192, 4});

}  // namespace

BENCHMARK_MAIN();
