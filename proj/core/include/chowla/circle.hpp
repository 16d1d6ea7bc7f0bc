#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chowla/graphmodel.hpp"
#include "chowla/multfunc.hpp"

namespace chowla {

// S_H(alpha) = sum over window primes of (c_p / p) e(alpha p), where
// e(x) = exp(2 pi i x). Empty windows (possible through the explicit-prime
// test surface) yield 0; *empty_flag reports that when requested.
cplx exp_sum_S(double alpha, const PrimeWindow& pw, bool* empty_flag = nullptr);

// S_H sampled on a frequency grid.
struct ExpSumProfile {
    std::vector<double> grid;  // alpha values in [0, 1)
    std::vector<cplx> values;  // S_H at each grid point
};

ExpSumProfile exp_sum_profile(const PrimeWindow& pw, const std::vector<double>& grid);

// The set of xi in Z/HZ for which some eta in Z/aZ puts
// |S_H(-(b+h) eta / a - h xi / H)| at or above eps^2 / ln H.
struct LargeValueSet {
    std::uint64_t H = 0;
    double threshold = 0.0;
    std::vector<std::uint64_t> members;  // ascending
};

// Exact membership by testing every (xi, eta) pair. Requires H a multiple
// of a. An explicit threshold overrides the default eps^2 / ln H.
LargeValueSet large_value_set(const PrimeWindow& pw, std::uint64_t H,
                              double threshold_override = -1.0);

// Largest grid the fourth-moment evaluation will materialize.
inline constexpr std::uint64_t kFourthMomentGridBudget = 10'000'000;

// Sum over k in Z/aHZ of |S_H(k/aH)|^4, evaluated on the full grid (FFT of
// the sparse c_p/p sequence for large grids, direct summation for small).
double fourth_moment(const PrimeWindow& pw, std::uint64_t a, std::uint64_t H);

// The same quantity by the closed-form prime-quadruple count:
//   aH * sum over p1+p2 = p3+p4 of c_p1 c_p2 conj(c_p3 c_p4)/(p1 p2 p3 p4).
// Equal to the grid value whenever all p1+p2 < aH (guaranteed for eps^2 <
// 1/2); kept permanently as the oracle for the grid path.
double fourth_moment_quadruple(const PrimeWindow& pw, std::uint64_t a, std::uint64_t H);

// G(xi) = (1/H) sum_j x_j e(-j xi / H) for xi in Z/HZ, with Plancherel
// sum |G|^2 = (1/H) sum |x_j|^2.
struct DftCoeffs {
    std::uint64_t H = 0;
    std::vector<cplx> G;
};

DftCoeffs dft_coeffs(const std::vector<cplx>& x);

// (H / ln H) (eps^2 + sum over members of |G1(xi)|), the right-hand side of
// the bilinear estimate; the paired check compares a decoupled sum against
// K times this for a fitted constant K.
double bilinear_bound_rhs(const std::vector<cplx>& x1, const LargeValueSet& xi,
                          const PrimeWindow& pw);

// Largest zero-padded transform maximal_short_exp_sum will run per window.
inline constexpr std::uint64_t kMaxExpSumGridBudget = 1ull << 22;

// Mean over window starts x0 = X, X+H, ... < 2X of the grid-sup
//   max over the oversample*H frequency grid of |(1/H) sum_{x0 <= n < x0+H}
//   g(n) e(alpha n)|.
// The grid sup lower-bounds the true sup; the grid is fine enough that
// refining oversample 4 -> 8 moves lambda inputs by under 5%.
double maximal_short_exp_sum(const MultSpec& g, std::uint64_t X, std::uint64_t H,
                             std::uint64_t oversample, int threads = 1);

}  // namespace chowla
