#include "chowla/sieve.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "chowla/errors.hpp"
#include "chowla/parallel.hpp"

namespace chowla {
namespace {

std::uint64_t isqrt64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Marks composites of [lo, hi) in flags (flags[i] <-> lo + i) using the
// supplied base primes, which must cover every prime <= sqrt(hi - 1).
void mark_composites(std::uint64_t lo, std::uint64_t hi,
                     const std::vector<std::uint64_t>& base, std::vector<std::uint8_t>& flags) {
    flags.assign(hi - lo, 1);
    for (std::uint64_t p : base) {
        if (p * p >= hi) break;
        std::uint64_t first = p * p;
        if (first < lo) {
            first = ((lo + p - 1) / p) * p;
            if (first == p) first += p;  // never unmark p itself
        }
        for (std::uint64_t m = first; m < hi; m += p) flags[m - lo] = 0;
    }
    if (lo <= 1) {
        for (std::uint64_t n = lo; n < 2 && n < hi; ++n) flags[n - lo] = 0;
    }
}

}  // namespace

SignWindow::SignWindow(std::uint64_t lo, std::uint64_t hi)
    : lo_(lo), hi_(hi), data_((hi - lo + 3) / 4, 0) {}

std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<std::uint8_t> flags(n + 1, 1);
    flags[0] = flags[1] = 0;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (flags[i])
            for (std::uint64_t m = i * i; m <= n; m += i) flags[m] = 0;
    for (std::uint64_t i = 2; i <= n; ++i)
        if (flags[i]) out.push_back(i);
    return out;
}

PrimeList primes_in(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 2 || lo >= hi)
        throw std::invalid_argument("primes_in: need 2 <= lo < hi, got [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + ")");
    if (hi - lo > kPrimesInBudget)
        throw budget_error("primes_in: range length " + std::to_string(hi - lo) +
                           " exceeds budget " + std::to_string(kPrimesInBudget));

    PrimeList out;
    out.lo = lo;
    out.hi = hi;
    std::vector<std::uint64_t> base = primes_upto(isqrt64(hi - 1));
    std::vector<std::uint8_t> flags;
    mark_composites(lo, hi, base, flags);
    for (std::uint64_t n = lo; n < hi; ++n)
        if (flags[n - lo]) out.primes.push_back(n);
    return out;
}

namespace {

// Shared workhorse for the lambda/mu windows. One segment pass accumulates,
// for every n, the parity of Omega(n) and the product of the prime powers
// p^{v_p(n)} over base primes p <= sqrt(hi-1); whatever is left of n after
// dividing that product out is either 1 or a single prime > sqrt(hi-1), so
// it contributes exactly one further factor. mu additionally tracks
// squarefreeness via the multiples of p^2.
template <bool kWantMu>
void sieve_signs_segment(std::uint64_t lo, std::uint64_t hi,
                         const std::vector<std::uint64_t>& base, SignWindow& win) {
    std::uint64_t len = hi - lo;
    std::vector<std::uint8_t> parity(len, 0);
    std::vector<std::uint64_t> prod(len, 1);
    std::vector<std::uint8_t> sqfree;
    if (kWantMu) sqfree.assign(len, 1);

    for (std::uint64_t p : base) {
        if (p > hi - 1) break;
        // Every power pe = p^k <= hi-1 flips parity on its multiples; the
        // flips add up to v_p(n) mod 2, and prod gains one factor p per flip.
        for (std::uint64_t pe = p; pe <= hi - 1; ) {
            std::uint64_t first = ((lo + pe - 1) / pe) * pe;
            for (std::uint64_t m = first; m < hi; m += pe) {
                parity[m - lo] ^= 1;
                prod[m - lo] *= p;
            }
            if (pe > (hi - 1) / p) break;  // next power would overflow the range
            pe *= p;
        }
        if (kWantMu) {
            if (p <= (hi - 1) / p) {
                std::uint64_t p2 = p * p;
                std::uint64_t first = ((lo + p2 - 1) / p2) * p2;
                for (std::uint64_t m = first; m < hi; m += p2) sqfree[m - lo] = 0;
            }
        }
    }

    for (std::uint64_t n = lo; n < hi; ++n) {
        std::uint64_t i = n - lo;
        std::uint8_t par = parity[i] ^ static_cast<std::uint8_t>(prod[i] != n);
        if (kWantMu && !sqfree[i])
            win.set(n, 0);
        else
            win.set(n, par ? -1 : +1);
    }
}

template <bool kWantMu>
SignWindow sign_window(std::uint64_t lo, std::uint64_t hi, int threads) {
    if (lo < 1 || lo >= hi)
        throw std::invalid_argument("sign window: need 1 <= lo < hi, got [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + ")");
    if (hi - lo > kSignWindowBudget)
        throw budget_error("sign window: length " + std::to_string(hi - lo) + " exceeds budget " +
                           std::to_string(kSignWindowBudget));

    SignWindow win(lo, hi);
    std::vector<std::uint64_t> base = primes_upto(isqrt64(hi - 1));
    // Segments start at lo + k*seg with seg a multiple of 4, so each one
    // writes a disjoint run of whole bytes in the packed array (4 values per
    // byte, window-relative) — concurrent segments never share a byte.
    constexpr std::uint64_t seg = 1u << 20;
    static_assert(seg % 4 == 0);
    map_segments<int>(lo, hi, seg, threads, [&](std::uint64_t, std::uint64_t a, std::uint64_t b) {
        sieve_signs_segment<kWantMu>(a, b, base, win);
        return 0;
    });
    return win;
}

}  // namespace

SignWindow liouville_window(std::uint64_t lo, std::uint64_t hi, int threads) {
    return sign_window<false>(lo, hi, threads);
}

SignWindow mobius_window(std::uint64_t lo, std::uint64_t hi, int threads) {
    return sign_window<true>(lo, hi, threads);
}

}  // namespace chowla
