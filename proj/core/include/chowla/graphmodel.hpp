#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chowla/logmeasure.hpp"
#include "chowla/multfunc.hpp"

namespace chowla {

// The primes in (eps^2 H / 2, eps^2 H] with their unit coefficients
// c_p = conj(g1(p)) conj(g2(p)), plus the configuration (a, b, h) they serve.
struct PrimeWindow {
    double eps = 0.0;
    std::uint64_t H = 0;
    CorrelationParams params;
    std::vector<std::uint64_t> primes;  // ascending
    std::vector<cplx> c;                // parallel to primes, |c_p| = 1

    // The canonical construction. Throws empty_prime_window_error when the
    // interval holds no primes, invalid_argument when some |c_p| != 1 or
    // gcd(a, p) > 1 (the residue split needs a invertible mod p).
    static PrimeWindow build(const MultSpec& g1, const MultSpec& g2, double eps, std::uint64_t H,
                             const CorrelationParams& params);

    // Test/instrumentation surface: an explicit prime set with coefficients,
    // bypassing the interval rule but keeping the unit-modulus and
    // coprimality checks.
    static PrimeWindow with_primes(std::vector<std::uint64_t> primes, std::vector<cplx> c,
                                   double eps, std::uint64_t H, const CorrelationParams& params);

    double sum_inv_p() const;  // sum of 1/p over the window
};

// One residue per window prime (r[i] = y mod primes[i]), plus y mod a.
struct ResidueTuple {
    std::vector<std::uint32_t> r;
    std::uint32_t r_mod_a = 0;
};

// The graph on {1..H} joining j to j+p when p | n+j, p in the window.
struct DivisorGraph {
    std::uint64_t n = 0;
    std::uint64_t H = 0;
    struct Edge {
        std::uint64_t j, jp, p;  // jp = j + p
    };
    std::vector<Edge> edges;  // sorted by (j, p)
};

DivisorGraph build_graph(std::uint64_t n, std::uint64_t H, const PrimeWindow& pw);

// Both rows of the bilinear form's input: values[i][j-1] = x_{i+1, j} for
// j = 1..H, each |x| <= 1.
struct XPair {
    std::vector<cplx> x1;
    std::vector<cplx> x2;
};

// F(x, y) = sum over p of F_p; the p-th piece is c_p times the sum of
// x_{1,j} x_{2,j+ph} over j with j === p b (mod a), j === -a y (mod p), and
// both j and j+ph inside [1, H].
cplx F_full(const XPair& x, const ResidueTuple& y, const PrimeWindow& pw);
cplx F_p(const XPair& x, const ResidueTuple& y, std::uint64_t p, const PrimeWindow& pw);

// E_y F(x, y) in closed form: sum over p of (c_p / p) times the sum of
// x_{1,j} x_{2,j+ph} over j === p b (mod a) with j, j+ph in [1, H].
cplx decoupled_mean(const XPair& x, const PrimeWindow& pw);

struct HoeffdingResult {
    cplx mean;          // empirical mean of F over the trials
    double stddev;      // sqrt(E |F - mean|^2)
    double threshold;   // eps^2 H / ln H
    double tail_freq;   // fraction of trials with |F - decoupled_mean| >= threshold
    double bound;       // two-sided Hoeffding bound from realized per-prime ranges
    cplx decoupled;     // the exact mean the tail is measured against
};

// Draws y uniformly (independent residues per prime) trials times and
// reports the concentration statistics. Deterministic in (seed, trials) for
// any thread count.
HoeffdingResult hoeffding_experiment(const XPair& x, const PrimeWindow& pw, std::uint64_t trials,
                                     std::uint64_t seed, int threads = 1);

}  // namespace chowla
