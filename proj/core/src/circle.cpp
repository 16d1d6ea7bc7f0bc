#include "chowla/circle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chowla/errors.hpp"
#include "chowla/kahan.hpp"
#include "chowla/parallel.hpp"

namespace chowla {
namespace {

// FFTW plan creation mutates global state; execution on distinct buffers is
// safe. One lock serializes planning.
std::mutex fftw_mutex;

struct FftBuffer {
    fftw_complex* data = nullptr;
    fftw_plan plan = nullptr;
    std::uint64_t n = 0;
    int sign = 0;

    FftBuffer(std::uint64_t n_, int sign_) : n(n_), sign(sign_) {
        data = fftw_alloc_complex(n);
        if (!data) throw std::bad_alloc();
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, sign, FFTW_ESTIMATE);
        if (!plan) {
            fftw_free(data);
            throw std::runtime_error("fftw plan creation failed");
        }
    }
    ~FftBuffer() {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
        fftw_free(data);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    void zero() { std::fill_n(reinterpret_cast<double*>(data), 2 * n, 0.0); }
    void set(std::uint64_t i, cplx v) {
        data[i][0] = v.real();
        data[i][1] = v.imag();
    }
    cplx get(std::uint64_t i) const { return {data[i][0], data[i][1]}; }
    void execute() { fftw_execute(plan); }
};

double two_pi() { return 2.0 * std::numbers::pi; }

}  // namespace

cplx exp_sum_S(double alpha, const PrimeWindow& pw, bool* empty_flag) {
    if (empty_flag) *empty_flag = pw.primes.empty();
    kahan_csum acc;
    for (std::size_t i = 0; i < pw.primes.size(); ++i) {
        double p = static_cast<double>(pw.primes[i]);
        // Reduce alpha*p mod 1 before the trig call; alpha*p can reach ~1e6
        // and the phase would otherwise lose precision.
        double frac = alpha * p - std::floor(alpha * p);
        acc.add(pw.c[i] / p * std::polar(1.0, two_pi() * frac));
    }
    return acc.value();
}

ExpSumProfile exp_sum_profile(const PrimeWindow& pw, const std::vector<double>& grid) {
    ExpSumProfile prof;
    prof.grid = grid;
    prof.values.reserve(grid.size());
    for (double alpha : grid) prof.values.push_back(exp_sum_S(alpha, pw));
    return prof;
}

namespace {

void check_grid_args(const PrimeWindow& pw, std::uint64_t a, std::uint64_t H,
                     const char* who) {
    if (a < 1 || H < 2)
        throw std::invalid_argument(std::string(who) + ": need a >= 1, H >= 2");
    if (a > kFourthMomentGridBudget / H)
        throw budget_error(std::string(who) + ": grid size a*H = " + std::to_string(a) + "*" +
                           std::to_string(H) + " exceeds budget " +
                           std::to_string(kFourthMomentGridBudget));
    for (std::uint64_t p : pw.primes)
        if (p >= a * H)
            throw std::invalid_argument(std::string(who) + ": window prime p = " +
                                        std::to_string(p) +
                                        " does not fit below the grid size a*H");
}

// S_H at every rational k/N, k in Z/NZ. Phases k*p are reduced mod N in
// integers, so each grid value is an exactly-phased finite sum; the FFT
// route (large N) is identical in exact arithmetic.
std::vector<cplx> s_on_grid(const PrimeWindow& pw, std::uint64_t N) {
    std::vector<cplx> S(N, cplx{});
    if (N <= (1u << 16)) {
        std::vector<cplx> root(N);
        for (std::uint64_t r = 0; r < N; ++r)
            root[r] = std::polar(1.0, two_pi() * static_cast<double>(r) / static_cast<double>(N));
        for (std::size_t i = 0; i < pw.primes.size(); ++i) {
            const std::uint64_t step = pw.primes[i] % N;
            const cplx w = pw.c[i] / static_cast<double>(pw.primes[i]);
            std::uint64_t r = 0;
            for (std::uint64_t k = 0; k < N; ++k) {
                S[k] += w * root[r];
                r += step;
                if (r >= N) r -= N;
            }
        }
        return S;
    }
    FftBuffer buf(N, FFTW_BACKWARD);  // e(+ k p / N) phases
    buf.zero();
    for (std::size_t i = 0; i < pw.primes.size(); ++i)
        buf.set(pw.primes[i] % N, pw.c[i] / static_cast<double>(pw.primes[i]));
    buf.execute();
    for (std::uint64_t k = 0; k < N; ++k) S[k] = buf.get(k);
    return S;
}

}  // namespace

LargeValueSet large_value_set(const PrimeWindow& pw, std::uint64_t H,
                              double threshold_override) {
    const std::uint64_t a = pw.params.a;
    if (H < 2 || H % a != 0)
        throw std::invalid_argument("large_value_set: H must be a positive multiple of a");
    check_grid_args(pw, a, H, "large_value_set");

    LargeValueSet out;
    out.H = H;
    out.threshold = threshold_override >= 0.0
                        ? threshold_override
                        : pw.eps * pw.eps / std::log(static_cast<double>(H));

    // Every candidate frequency -(b+h) eta / a - h xi / H is a rational with
    // denominator N = aH; membership reduces to lookups into the full grid.
    const std::uint64_t N = a * H;
    std::vector<cplx> S = s_on_grid(pw, N);
    const std::int64_t iN = static_cast<std::int64_t>(N);
    for (std::uint64_t xi = 0; xi < H; ++xi) {
        bool large = false;
        for (std::uint64_t eta = 0; eta < a && !large; ++eta) {
            std::int64_t num = -(pw.params.b + pw.params.h) * static_cast<std::int64_t>(eta) *
                                   static_cast<std::int64_t>(H) -
                               pw.params.h * static_cast<std::int64_t>(xi) *
                                   static_cast<std::int64_t>(a);
            std::int64_t k = num % iN;
            if (k < 0) k += iN;
            large = std::abs(S[static_cast<std::uint64_t>(k)]) >= out.threshold;
        }
        if (large) out.members.push_back(xi);
    }
    return out;
}

double fourth_moment(const PrimeWindow& pw, std::uint64_t a, std::uint64_t H) {
    check_grid_args(pw, a, H, "fourth_moment");
    std::vector<cplx> S = s_on_grid(pw, a * H);
    kahan_sum acc;
    for (const cplx& s : S) {
        double m2 = std::norm(s);
        acc.add(m2 * m2);
    }
    return acc.value();
}

double fourth_moment_quadruple(const PrimeWindow& pw, std::uint64_t a, std::uint64_t H) {
    check_grid_args(pw, a, H, "fourth_moment_quadruple");
    const std::size_t n = pw.primes.size();
    if (n > 200)
        throw budget_error("fourth_moment_quadruple: |P_H| = " + std::to_string(n) +
                           " beyond the 200-prime enumeration budget");
    kahan_csum acc;
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i3 = 0; i3 < n; ++i3)
                for (std::size_t i4 = 0; i4 < n; ++i4) {
                    if (pw.primes[i1] + pw.primes[i2] != pw.primes[i3] + pw.primes[i4]) continue;
                    cplx num = pw.c[i1] * pw.c[i2] * std::conj(pw.c[i3] * pw.c[i4]);
                    double den = static_cast<double>(pw.primes[i1]) * static_cast<double>(pw.primes[i2]) *
                                 static_cast<double>(pw.primes[i3]) * static_cast<double>(pw.primes[i4]);
                    acc.add(num / den);
                }
    // The quadruple identity carries one factor of the grid size.
    return static_cast<double>(a) * static_cast<double>(H) * acc.value().real();
}

DftCoeffs dft_coeffs(const std::vector<cplx>& x) {
    if (x.empty()) throw std::invalid_argument("dft_coeffs: need H >= 1");
    const std::uint64_t H = x.size();
    DftCoeffs out;
    out.H = H;
    out.G.resize(H);
    FftBuffer buf(H, FFTW_FORWARD);  // forward sign matches e(-j xi / H)
    for (std::uint64_t j = 0; j < H; ++j) buf.set(j, x[j]);
    buf.execute();
    for (std::uint64_t k = 0; k < H; ++k) out.G[k] = buf.get(k) / static_cast<double>(H);
    return out;
}

double bilinear_bound_rhs(const std::vector<cplx>& x1, const LargeValueSet& xi,
                          const PrimeWindow& pw) {
    if (x1.size() != xi.H)
        throw std::invalid_argument("bilinear_bound_rhs: x1 must have length H");
    for (const cplx& v : x1)
        if (std::abs(v) > 1.0 + 1e-9)
            throw std::invalid_argument("bilinear_bound_rhs: |x1| must be <= 1");
    DftCoeffs G = dft_coeffs(x1);
    kahan_sum gsum;
    for (std::uint64_t m : xi.members) gsum.add(std::abs(G.G[m]));
    double H = static_cast<double>(xi.H);
    return H / std::log(H) * (pw.eps * pw.eps + gsum.value());
}

double maximal_short_exp_sum(const MultSpec& g, std::uint64_t X, std::uint64_t H,
                             std::uint64_t oversample, int threads) {
    if (X < 2 || H < 1 || oversample < 1)
        throw std::invalid_argument("maximal_short_exp_sum: need X >= 2, H >= 1, oversample >= 1");
    if (H > kMaxExpSumGridBudget / oversample)
        throw budget_error("maximal_short_exp_sum: grid " + std::to_string(oversample) + "*" +
                           std::to_string(H) + " exceeds budget " +
                           std::to_string(kMaxExpSumGridBudget));
    const std::uint64_t G = oversample * H;
    const std::uint64_t nwin = (2 * X - X + H - 1) / H;  // windows starting in [X, 2X)

    // Values are materialized per window chunk; each thread owns one FFT
    // buffer. The per-window sup is independent of threading, and the final
    // mean folds window order deterministically.
    struct WinChunk {
        std::vector<double> sups;
    };
    constexpr std::uint64_t kWinChunk = 64;
    auto chunks = map_segments<WinChunk>(
        0, nwin, kWinChunk, threads, [&](std::uint64_t, std::uint64_t w0, std::uint64_t w1) {
            WinChunk ch;
            ch.sups.reserve(w1 - w0);
            FftBuffer buf(G, FFTW_BACKWARD);  // e(+ alpha n) phases
            std::uint64_t lo = X + w0 * H;
            std::uint64_t hi = std::min(2 * X, X + w1 * H) + H;  // last window may overrun 2X
            ComplexWindow vals = g.evaluate_window(lo, hi);
            for (std::uint64_t w = w0; w < w1; ++w) {
                std::uint64_t n0 = X + w * H;
                buf.zero();
                for (std::uint64_t m = 0; m < H; ++m) buf.set(m, vals.at(n0 + m));
                buf.execute();
                double best = 0.0;
                for (std::uint64_t k = 0; k < G; ++k) best = std::max(best, std::norm(buf.get(k)));
                ch.sups.push_back(std::sqrt(best) / static_cast<double>(H));
            }
            return ch;
        });

    kahan_sum mean;
    std::uint64_t count = 0;
    for (const auto& ch : chunks)
        for (double s : ch.sups) {
            mean.add(s);
            ++count;
        }
    return mean.value() / static_cast<double>(count);
}

}  // namespace chowla
