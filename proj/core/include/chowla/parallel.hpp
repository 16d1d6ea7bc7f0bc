#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace chowla {

// Resolves a thread-count request: 0 means "use the hardware", anything else
// is taken literally (clamped to >= 1).
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [lo, hi) into fixed-length segments and evaluates
// fn(seg_index, seg_lo, seg_hi) for each, possibly concurrently. Results are
// indexed by segment, so a caller that folds them in index order gets the
// same bits no matter how many workers ran. The segmentation depends only on
// seg_len, never on the thread count — this is what makes every aggregate in
// the library reproducible across --threads settings.
template <class T, class Fn>
std::vector<T> map_segments(std::uint64_t lo, std::uint64_t hi, std::uint64_t seg_len,
                            int threads, Fn&& fn) {
    std::vector<T> results;
    if (hi <= lo) return results;
    if (seg_len == 0) seg_len = hi - lo;
    std::uint64_t nseg = (hi - lo + seg_len - 1) / seg_len;
    results.resize(nseg);

    int nthreads = resolve_threads(threads);
    if (nthreads > static_cast<int>(nseg)) nthreads = static_cast<int>(nseg);

    auto run_segment = [&](std::uint64_t i) {
        std::uint64_t a = lo + i * seg_len;
        std::uint64_t b = a + seg_len < hi ? a + seg_len : hi;
        results[i] = fn(i, a, b);
    };

    if (nthreads <= 1) {
        for (std::uint64_t i = 0; i < nseg; ++i) run_segment(i);
        return results;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::uint64_t i = next.fetch_add(1);
                if (i >= nseg || failed.load()) return;
                try {
                    run_segment(i);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);
    return results;
}

// Segment length used by the window scans. Compiled in (not tunable at run
// time) because changing it changes summation grouping and therefore the
// low-order bits of compensated sums.
inline constexpr std::uint64_t kScanSegment = 1u << 20;

}  // namespace chowla
