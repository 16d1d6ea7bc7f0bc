#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "chowla/kahan.hpp"
#include "chowla/multfunc.hpp"
#include "chowla/parallel.hpp"

namespace chowla {

// The weighted population {n : lo < n <= x} with P(n) = (1/n)/Z, the
// logarithmic measure at scale (x, omega). Z is close to ln(omega); the
// window is (floor(x/omega), x].
struct LogWindow {
    std::uint64_t x = 0;
    double omega = 1.0;
    std::uint64_t lo = 0;  // exclusive lower edge
    double Z = 0.0;        // sum of 1/n over the window

    std::uint64_t size() const { return x - lo; }
};

// Requires 1 <= omega <= x and a nonempty window (floor(x/omega) < x).
LogWindow make_log_window(std::uint64_t x, double omega, int threads = 1);

// The reduced two-point configuration: offsets a*n + b and a*n + b + h.
struct CorrelationParams {
    std::uint64_t a = 1;
    std::int64_t b = 0;
    std::int64_t h = 1;
};

// Throws invalid_argument unless a >= 1 and h != 0.
void validate(const CorrelationParams& p);

enum class Weighting {
    logarithmic,  // weight 1/n, normalizer Z
    natural,      // weight 1, normalizer window size; no accuracy claims
};

// E[f(n)] under the window's measure. f is any callable n -> complex with
// |f| <= max|f|; summation is ascending-n compensated within fixed segments,
// so the result is identical for every thread count.
template <class Fn>
cplx log_expectation(const LogWindow& w, int threads, Fn&& f) {
    auto partials = map_segments<kahan_csum>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            kahan_csum acc;
            for (std::uint64_t n = s; n < e; ++n)
                acc.add(f(n) * (1.0 / static_cast<double>(n)));
            return acc;
        });
    kahan_csum total;
    for (const auto& part : partials) total.add(part);
    return total.value() / w.Z;
}

struct Correlation2Result {
    cplx raw;         // sum of g1(an+b) g2(an+b+h) / n over the window
    cplx normalized;  // raw / Z
    std::uint64_t skipped = 0;  // n with an+b < 1 or an+b+h < 1, left out
};

Correlation2Result correlation2(const MultSpec& g1, const MultSpec& g2,
                                const CorrelationParams& p, const LogWindow& w, int threads = 1,
                                Weighting weighting = Weighting::logarithmic);

struct Correlation3Result {
    cplx raw;  // sum of g1(n+s1) g2(n+s2) g3(n+s3) / n
    cplx normalized;
    std::uint64_t skipped = 0;
};

Correlation3Result correlation3(const MultSpec& g1, const MultSpec& g2, const MultSpec& g3,
                                const std::array<std::int64_t, 3>& shifts, const LogWindow& w,
                                int threads = 1, Weighting weighting = Weighting::logarithmic);

// Logarithmic densities of the 3^k sign patterns (f(n), ..., f(n+k-1)).
// Patterns are indexed little-endian base 3 with digits f(n+i) + 1.
struct SignPatternTally {
    int k = 0;
    std::vector<double> density;  // size 3^k, sums to 1 up to 1e-12

    static std::size_t index_of(const std::vector<int>& pattern);
    static std::vector<int> pattern_of(std::size_t index, int k);
    double at(const std::vector<int>& pattern) const { return density[index_of(pattern)]; }
};

// Requires 1 <= k <= 8 and a sign-valued f.
SignPatternTally sign_pattern_density(const MultSpec& f, int k, const LogWindow& w,
                                      int threads = 1,
                                      Weighting weighting = Weighting::logarithmic);

struct AffineCheckResult {
    cplx lhs;    // E[ f(n) 1_{n === r mod q} ]
    cplx rhs;    // (1/q) E[ f(q n + r) ]
    double gap;  // |lhs - rhs|
};

// The approximate-affine-invariance gap for a bounded functional f. Requires
// q >= 1 and q*(lo+1) + r >= 1 so the dilated argument stays positive.
template <class Fn>
AffineCheckResult affine_invariance_check(const LogWindow& w, std::uint64_t q, std::int64_t r,
                                          int threads, Fn&& f) {
    if (q == 0) throw std::invalid_argument("affine_invariance_check: q must be >= 1");
    std::int64_t first = static_cast<std::int64_t>(q) * static_cast<std::int64_t>(w.lo + 1) + r;
    if (first < 1)
        throw std::invalid_argument("affine_invariance_check: q*n + r falls below 1 on the window");
    std::uint64_t rr = static_cast<std::uint64_t>(((r % static_cast<std::int64_t>(q)) +
                                                   static_cast<std::int64_t>(q)) %
                                                  static_cast<std::int64_t>(q));
    cplx lhs = log_expectation(w, threads, [&](std::uint64_t n) {
        return n % q == rr ? f(n) : cplx{};
    });
    cplx rhs = log_expectation(w, threads, [&](std::uint64_t n) {
                   return f(static_cast<std::uint64_t>(
                       static_cast<std::int64_t>(q * n) + r));
               }) /
               static_cast<double>(q);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace chowla
