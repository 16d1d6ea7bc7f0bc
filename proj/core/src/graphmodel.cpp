#include "chowla/graphmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chowla/errors.hpp"
#include "chowla/kahan.hpp"
#include "chowla/parallel.hpp"
#include "chowla/rng.hpp"
#include "chowla/sieve.hpp"

namespace chowla {
namespace {

constexpr double kUnitTol = 1e-9;

void check_window_consistency(const PrimeWindow& pw) {
    validate(pw.params);
    if (pw.primes.size() != pw.c.size())
        throw std::invalid_argument("prime window: primes and coefficients must align");
    for (std::size_t i = 0; i < pw.primes.size(); ++i) {
        if (i > 0 && pw.primes[i] <= pw.primes[i - 1])
            throw std::invalid_argument("prime window: primes must be strictly increasing");
        if (std::abs(std::abs(pw.c[i]) - 1.0) > kUnitTol)
            throw std::invalid_argument("prime window: |c_p| must be 1 at p = " +
                                        std::to_string(pw.primes[i]));
        if (std::gcd(pw.params.a, pw.primes[i]) != 1)
            throw std::invalid_argument("prime window: a must be coprime to every window prime");
    }
}

// First j >= 1 with j === target (mod m).
std::uint64_t first_in_class(std::uint64_t target, std::uint64_t m) {
    std::uint64_t t = target % m;
    return t == 0 ? m : t;
}

// j-range restriction: both j and j + p*h must land in [1, H].
struct JRange {
    std::int64_t lo, hi;  // inclusive bounds on j; empty when lo > hi
};

JRange j_bounds(std::uint64_t H, std::uint64_t p, std::int64_t h) {
    std::int64_t ph = static_cast<std::int64_t>(p) * h;
    std::int64_t lo = std::max<std::int64_t>(1, 1 - ph);
    std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(H),
                                             static_cast<std::int64_t>(H) - ph);
    return {lo, hi};
}

std::int64_t mod_pos(std::int64_t v, std::int64_t m) {
    std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

}  // namespace

PrimeWindow PrimeWindow::build(const MultSpec& g1, const MultSpec& g2, double eps, std::uint64_t H,
                               const CorrelationParams& params) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("prime window: eps must lie in (0, 1)");
    if (H < 2) throw std::invalid_argument("prime window: H must be >= 2");
    validate(params);

    const double e2H = eps * eps * static_cast<double>(H);
    std::uint64_t lo = static_cast<std::uint64_t>(std::floor(e2H / 2.0)) + 1;
    std::uint64_t hi = static_cast<std::uint64_t>(std::floor(e2H)) + 1;

    PrimeWindow pw;
    pw.eps = eps;
    pw.H = H;
    pw.params = params;
    if (lo < hi && hi > 2) {
        PrimeList pl = primes_in(std::max<std::uint64_t>(2, lo), hi);
        for (std::uint64_t p : pl.primes) {
            // Guard the float edges of the interval exactly.
            double pd = static_cast<double>(p);
            if (pd > e2H / 2.0 && pd <= e2H) {
                pw.primes.push_back(p);
                pw.c.push_back(std::conj(g1.at_prime_power(p, 1)) *
                               std::conj(g2.at_prime_power(p, 1)));
            }
        }
    }
    if (pw.primes.empty())
        throw empty_prime_window_error("no primes in (" + std::to_string(e2H / 2.0) + ", " +
                                       std::to_string(e2H) + "] for eps=" + std::to_string(eps) +
                                       ", H=" + std::to_string(H));
    check_window_consistency(pw);
    return pw;
}

PrimeWindow PrimeWindow::with_primes(std::vector<std::uint64_t> primes, std::vector<cplx> c,
                                     double eps, std::uint64_t H,
                                     const CorrelationParams& params) {
    PrimeWindow pw;
    pw.eps = eps;
    pw.H = H;
    pw.params = params;
    pw.primes = std::move(primes);
    pw.c = std::move(c);
    if (pw.primes.empty()) throw empty_prime_window_error("explicit prime set is empty");
    check_window_consistency(pw);
    return pw;
}

double PrimeWindow::sum_inv_p() const {
    kahan_sum s;
    for (std::uint64_t p : primes) s.add(1.0 / static_cast<double>(p));
    return s.value();
}

DivisorGraph build_graph(std::uint64_t n, std::uint64_t H, const PrimeWindow& pw) {
    if (n < 1) throw std::invalid_argument("build_graph: n must be >= 1");
    DivisorGraph g;
    g.n = n;
    g.H = H;
    for (std::uint64_t p : pw.primes) {
        // p | n + j  <=>  j === -n (mod p)
        std::uint64_t j0 = first_in_class(p - n % p, p);
        for (std::uint64_t j = j0; j + p <= H; j += p) g.edges.push_back({j, j + p, p});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
        return a.j != b.j ? a.j < b.j : a.p < b.p;
    });
    return g;
}

namespace {

void check_x(const XPair& x, const PrimeWindow& pw) {
    if (x.x1.size() != pw.H || x.x2.size() != pw.H)
        throw std::invalid_argument("x values: both rows must have length H = " +
                                    std::to_string(pw.H));
}

void check_y(const ResidueTuple& y, const PrimeWindow& pw) {
    if (y.r.size() != pw.primes.size())
        throw std::invalid_argument("residue tuple: one residue per window prime required");
    for (std::size_t i = 0; i < y.r.size(); ++i)
        if (y.r[i] >= pw.primes[i])
            throw std::invalid_argument("residue tuple: residue out of range at p = " +
                                        std::to_string(pw.primes[i]));
}

cplx F_piece(const XPair& x, std::uint32_t y_mod_p, std::size_t pi, const PrimeWindow& pw) {
    const std::uint64_t p = pw.primes[pi];
    const std::int64_t a = static_cast<std::int64_t>(pw.params.a);
    const std::int64_t ph = static_cast<std::int64_t>(p) * pw.params.h;
    JRange jr = j_bounds(pw.H, p, pw.params.h);
    if (jr.lo > jr.hi) return {};

    // The indicator a y + j === p b (mod a p) splits over the coprime moduli:
    //   j === p b (mod a)   and   j === -a y (mod p).
    std::int64_t rj_a = mod_pos(static_cast<std::int64_t>(p % pw.params.a) * pw.params.b, a);
    std::int64_t rj_p = mod_pos(-a * static_cast<std::int64_t>(y_mod_p),
                                static_cast<std::int64_t>(p));

    cplx sum = 0.0;
    // Walk the mod-p class inside [lo, hi] and filter by the mod-a condition;
    // classes are short (length ~ H/p <= 2/eps^2), so this stays O(1)-ish.
    std::int64_t start = jr.lo + mod_pos(rj_p - jr.lo, static_cast<std::int64_t>(p));
    for (std::int64_t j = start; j <= jr.hi; j += static_cast<std::int64_t>(p)) {
        if (mod_pos(j, a) != rj_a) continue;
        sum += x.x1[static_cast<std::size_t>(j - 1)] *
               x.x2[static_cast<std::size_t>(j + ph - 1)];
    }
    return pw.c[pi] * sum;
}

}  // namespace

cplx F_p(const XPair& x, const ResidueTuple& y, std::uint64_t p, const PrimeWindow& pw) {
    check_x(x, pw);
    check_y(y, pw);
    auto it = std::lower_bound(pw.primes.begin(), pw.primes.end(), p);
    if (it == pw.primes.end() || *it != p)
        throw std::invalid_argument("F_p: p = " + std::to_string(p) + " is not a window prime");
    std::size_t pi = static_cast<std::size_t>(it - pw.primes.begin());
    return F_piece(x, y.r[pi], pi, pw);
}

cplx F_full(const XPair& x, const ResidueTuple& y, const PrimeWindow& pw) {
    check_x(x, pw);
    check_y(y, pw);
    cplx total = 0.0;
    for (std::size_t pi = 0; pi < pw.primes.size(); ++pi)
        total += F_piece(x, y.r[pi], pi, pw);
    return total;
}

cplx decoupled_mean(const XPair& x, const PrimeWindow& pw) {
    check_x(x, pw);
    kahan_csum total;
    const std::int64_t a = static_cast<std::int64_t>(pw.params.a);
    for (std::size_t pi = 0; pi < pw.primes.size(); ++pi) {
        const std::uint64_t p = pw.primes[pi];
        const std::int64_t ph = static_cast<std::int64_t>(p) * pw.params.h;
        JRange jr = j_bounds(pw.H, p, pw.params.h);
        std::int64_t rj_a = mod_pos(static_cast<std::int64_t>(p % pw.params.a) * pw.params.b, a);
        cplx sum = 0.0;
        if (jr.lo <= jr.hi) {
            std::int64_t start = jr.lo + mod_pos(rj_a - jr.lo, a);
            for (std::int64_t j = start; j <= jr.hi; j += a)
                sum += x.x1[static_cast<std::size_t>(j - 1)] *
                       x.x2[static_cast<std::size_t>(j + ph - 1)];
        }
        total.add(pw.c[pi] * sum / static_cast<double>(p));
    }
    return total.value();
}

HoeffdingResult hoeffding_experiment(const XPair& x, const PrimeWindow& pw, std::uint64_t trials,
                                     std::uint64_t seed, int threads) {
    check_x(x, pw);
    if (trials < 1) throw std::invalid_argument("hoeffding_experiment: trials must be >= 1");

    const std::size_t np = pw.primes.size();
    HoeffdingResult res;
    res.threshold = pw.eps * pw.eps * static_cast<double>(pw.H) /
                    std::log(static_cast<double>(pw.H));
    res.decoupled = decoupled_mean(x, pw);

    // Realized per-prime value sets: F_p takes at most p distinct values, one
    // per residue class, so ranges are exact by enumeration.
    double sum_range_re2 = 0.0, sum_range_im2 = 0.0;
    for (std::size_t pi = 0; pi < np; ++pi) {
        double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
        for (std::uint32_t y = 0; y < pw.primes[pi]; ++y) {
            cplx v = F_piece(x, y, pi, pw);
            re_lo = std::min(re_lo, v.real());
            re_hi = std::max(re_hi, v.real());
            im_lo = std::min(im_lo, v.imag());
            im_hi = std::max(im_hi, v.imag());
        }
        double dre = re_hi - re_lo, dim = im_hi - im_lo;
        sum_range_re2 += dre * dre;
        sum_range_im2 += dim * dim;
    }
    // Two-sided Hoeffding for the real part; when the imaginary ranges are
    // all zero F is real and the classical bound applies directly. Otherwise
    // split the modulus tail over the two components at t/sqrt(2) each.
    auto hoeffding_tail = [](double t, double sum_d2) {
        if (sum_d2 == 0.0) return 0.0;
        return 2.0 * std::exp(-2.0 * t * t / sum_d2);
    };
    if (sum_range_im2 == 0.0) {
        res.bound = hoeffding_tail(res.threshold, sum_range_re2);
    } else {
        double t2 = res.threshold / std::sqrt(2.0);
        res.bound = hoeffding_tail(t2, sum_range_re2) + hoeffding_tail(t2, sum_range_im2);
    }

    // Trials are keyed by index, so any partitioning over threads draws the
    // same y tuples; sums are folded in fixed chunk order.
    struct Chunk {
        kahan_csum sum;
        kahan_sum sumsq;  // |F|^2 accumulator
        std::uint64_t tail = 0;
    };
    constexpr std::uint64_t kTrialChunk = 1u << 12;
    cplx dec = res.decoupled;
    auto chunks = map_segments<Chunk>(
        0, trials, kTrialChunk, threads, [&](std::uint64_t, std::uint64_t t0, std::uint64_t t1) {
            Chunk ch;
            for (std::uint64_t t = t0; t < t1; ++t) {
                cplx F = 0.0;
                for (std::size_t pi = 0; pi < np; ++pi) {
                    std::uint64_t p = pw.primes[pi];
                    std::uint32_t y = static_cast<std::uint32_t>(
                        uniform_below(mix64(seed, t, pi), p));
                    F += F_piece(x, y, pi, pw);
                }
                ch.sum.add(F);
                ch.sumsq.add(std::norm(F));
                if (std::abs(F - dec) >= res.threshold) ++ch.tail;
            }
            return ch;
        });

    kahan_csum sum;
    kahan_sum sumsq;
    std::uint64_t tail = 0;
    for (const auto& ch : chunks) {
        sum.add(ch.sum);
        sumsq.add(ch.sumsq);
        tail += ch.tail;
    }
    double nt = static_cast<double>(trials);
    res.mean = sum.value() / nt;
    double var = sumsq.value() / nt - std::norm(res.mean);
    res.stddev = var > 0 ? std::sqrt(var) : 0.0;
    res.tail_freq = static_cast<double>(tail) / nt;
    return res;
}

}  // namespace chowla
