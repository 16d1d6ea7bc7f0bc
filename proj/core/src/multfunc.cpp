#include "chowla/multfunc.hpp"

#include <cmath>
#include <cfenv>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chowla/errors.hpp"
#include "chowla/kahan.hpp"
#include "chowla/parallel.hpp"
#include "chowla/rng.hpp"

namespace chowla {
namespace {

constexpr double kMagnitudeTol = 1e-12;

std::uint64_t isqrt64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

double random_mult_draw(std::uint64_t seed, std::uint64_t p, std::uint32_t j, double mean) {
    double u = uniform01(mix64(seed, p, j));
    return u < 0.5 * (1.0 + mean) ? +1.0 : -1.0;
}

}  // namespace

MultSpec MultSpec::liouville() { return MultSpec(Kind::Liouville); }
MultSpec MultSpec::mobius() { return MultSpec(Kind::Mobius); }
MultSpec MultSpec::mobius_squared() { return MultSpec(Kind::MobiusSquared); }
MultSpec MultSpec::constant_one() { return MultSpec(Kind::Constant); }

MultSpec MultSpec::dirichlet_character(std::uint64_t q, std::vector<cplx> table) {
    if (q == 0 || table.size() != q)
        throw std::invalid_argument("dirichlet_character: table must have exactly q entries");
    for (std::uint64_t r = 0; r < q; ++r) {
        if (std::abs(table[r]) > 1.0 + kMagnitudeTol)
            throw std::invalid_argument("dirichlet_character: |table[" + std::to_string(r) +
                                        "]| > 1");
        bool coprime = std::gcd(r, q) == 1;
        if (coprime == (std::abs(table[r]) < kMagnitudeTol))
            throw std::invalid_argument(
                "dirichlet_character: table must vanish exactly off the units mod q (residue " +
                std::to_string(r) + ")");
    }
    MultSpec s(Kind::Character);
    s.q_ = q;
    s.table_ = std::move(table);
    return s;
}

MultSpec MultSpec::principal_character(std::uint64_t q) {
    std::vector<cplx> table(q);
    for (std::uint64_t r = 0; r < q; ++r) table[r] = std::gcd(r, q) == 1 ? 1.0 : 0.0;
    return dirichlet_character(q, std::move(table));
}

MultSpec MultSpec::archimedean_twist(double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("archimedean_twist: t must be finite");
    MultSpec s(Kind::Twist);
    s.t_ = t;
    return s;
}

MultSpec MultSpec::pointwise_product(std::vector<MultSpec> factors) {
    if (factors.empty())
        throw std::invalid_argument("pointwise_product: need at least one factor");
    MultSpec s(Kind::Product);
    s.factors_ = std::move(factors);
    return s;
}

bool MultSpec::completely_multiplicative() const {
    switch (kind_) {
        case Kind::Liouville:
        case Kind::Character:
        case Kind::Twist:
        case Kind::Constant:
            return true;
        case Kind::Mobius:
        case Kind::MobiusSquared:
        case Kind::RandomMult:
            return false;
        case Kind::Product:
            for (const auto& f : factors_)
                if (!f.completely_multiplicative()) return false;
            return true;
    }
    return false;
}

bool MultSpec::sign_valued() const {
    switch (kind_) {
        case Kind::Liouville:
        case Kind::Mobius:
        case Kind::MobiusSquared:
        case Kind::Constant:
        case Kind::RandomMult:
            return true;
        case Kind::Twist:
            return t_ == 0.0;
        case Kind::Character: {
            for (const auto& v : table_)
                if (std::abs(v.imag()) > kMagnitudeTol ||
                    std::abs(std::abs(v.real()) - std::round(std::abs(v.real()))) > kMagnitudeTol)
                    return false;
            return true;
        }
        case Kind::Product:
            for (const auto& f : factors_)
                if (!f.sign_valued()) return false;
            return true;
    }
    return false;
}

cplx MultSpec::at_prime_power(std::uint64_t p, std::uint32_t j) const {
    switch (kind_) {
        case Kind::Liouville:
            return (j & 1) ? -1.0 : +1.0;
        case Kind::Mobius:
            return j == 1 ? -1.0 : 0.0;
        case Kind::MobiusSquared:
            return j == 1 ? 1.0 : 0.0;
        case Kind::Constant:
            return 1.0;
        case Kind::Character: {
            cplx base = table_[p % q_];
            cplx v = 1.0;
            for (std::uint32_t k = 0; k < j; ++k) v *= base;
            return v;
        }
        case Kind::Twist:
            return std::polar(1.0, t_ * static_cast<double>(j) * std::log(static_cast<double>(p)));
        case Kind::Product: {
            cplx v = 1.0;
            for (const auto& f : factors_) v *= f.at_prime_power(p, j);
            return v;
        }
        case Kind::RandomMult: {
            cplx m = mean_->at_prime_power(p, j);
            if (std::abs(m.imag()) > kMagnitudeTol || m.real() < -1.0 - kMagnitudeTol ||
                m.real() > 1.0 + kMagnitudeTol)
                throw std::invalid_argument("random model: mean at prime power outside [-1, 1]");
            return random_mult_draw(seed_, p, j, std::clamp(m.real(), -1.0, 1.0));
        }
    }
    return 0.0;
}

cplx MultSpec::at(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("MultSpec::at: n must be >= 1");
    cplx v = 1.0;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p) continue;
        std::uint32_t j = 0;
        while (m % p == 0) {
            m /= p;
            ++j;
        }
        v *= at_prime_power(p, j);
        if (v == cplx{}) return v;
    }
    if (m > 1) v *= at_prime_power(m, 1);
    return v;
}

namespace {

// Factoring sweep: divide every n in the segment by the powers of all base
// primes, multiplying in at_prime_power as exponents are discovered; the
// undivided remainder is either 1 or one prime above sqrt(hi-1).
void evaluate_segment_generic(const MultSpec& spec, std::uint64_t lo, std::uint64_t hi,
                              const std::vector<std::uint64_t>& base, cplx* out) {
    std::uint64_t len = hi - lo;
    std::vector<std::uint64_t> rem(len);
    for (std::uint64_t i = 0; i < len; ++i) {
        rem[i] = lo + i;
        out[i] = 1.0;
    }
    for (std::uint64_t p : base) {
        if (p > hi - 1) break;
        std::uint64_t first = ((lo + p - 1) / p) * p;
        for (std::uint64_t m = first; m < hi; m += p) {
            std::uint64_t i = m - lo;
            std::uint32_t j = 0;
            while (rem[i] % p == 0) {
                rem[i] /= p;
                ++j;
            }
            out[i] *= spec.at_prime_power(p, j);
        }
    }
    for (std::uint64_t i = 0; i < len; ++i) {
        if (rem[i] > 1) out[i] *= spec.at_prime_power(rem[i], 1);
        if (lo + i == 1) out[i] = 1.0;  // empty product
    }
}

void fill_from_signs(const SignWindow& sw, std::uint64_t lo, std::uint64_t hi, cplx* out) {
    for (std::uint64_t n = lo; n < hi; ++n) out[n - lo] = static_cast<double>(sw.get(n));
}

}  // namespace

ComplexWindow MultSpec::evaluate_window(std::uint64_t lo, std::uint64_t hi, int threads) const {
    if (lo < 1 || lo >= hi)
        throw std::invalid_argument("evaluate_window: need 1 <= lo < hi");
    if (hi - lo > kSignWindowBudget)
        throw budget_error("evaluate_window: length " + std::to_string(hi - lo) +
                           " exceeds budget " + std::to_string(kSignWindowBudget));

    ComplexWindow w;
    w.lo = lo;
    w.hi = hi;
    w.values.resize(hi - lo);

    switch (kind_) {
        case Kind::Constant: {
            for (auto& v : w.values) v = 1.0;
            return w;
        }
        case Kind::Liouville: {
            SignWindow sw = liouville_window(lo, hi, threads);
            fill_from_signs(sw, lo, hi, w.values.data());
            return w;
        }
        case Kind::Mobius: {
            SignWindow sw = mobius_window(lo, hi, threads);
            fill_from_signs(sw, lo, hi, w.values.data());
            return w;
        }
        case Kind::MobiusSquared: {
            SignWindow sw = mobius_window(lo, hi, threads);
            for (std::uint64_t n = lo; n < hi; ++n)
                w.values[n - lo] = static_cast<double>(std::abs(sw.get(n)));
            return w;
        }
        case Kind::Character: {
            for (std::uint64_t n = lo; n < hi; ++n) w.values[n - lo] = table_[n % q_];
            return w;
        }
        case Kind::Twist: {
            const double t = t_;
            map_segments<int>(lo, hi, kScanSegment, threads,
                              [&](std::uint64_t, std::uint64_t a, std::uint64_t b) {
                                  for (std::uint64_t n = a; n < b; ++n)
                                      w.values[n - lo] = std::polar(
                                          1.0, t * std::log(static_cast<double>(n)));
                                  return 0;
                              });
            return w;
        }
        case Kind::Product: {
            for (auto& v : w.values) v = 1.0;
            for (const auto& f : factors_) {
                ComplexWindow part = f.evaluate_window(lo, hi, threads);
                for (std::uint64_t i = 0; i < w.values.size(); ++i) w.values[i] *= part.values[i];
            }
            return w;
        }
        case Kind::RandomMult: {
            std::vector<std::uint64_t> base = primes_upto(isqrt64(hi - 1));
            map_segments<int>(lo, hi, kScanSegment, threads,
                              [&](std::uint64_t, std::uint64_t a, std::uint64_t b) {
                                  evaluate_segment_generic(*this, a, b, base,
                                                           w.values.data() + (a - lo));
                                  return 0;
                              });
            return w;
        }
    }
    throw std::logic_error("evaluate_window: unhandled kind");
}

cplx discretise(cplx z, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("discretise: eps must lie in (0, 1)");
    if (std::abs(z) > 1.0 + kMagnitudeTol)
        throw std::invalid_argument("discretise: |z| must be <= 1");
    double spacing = eps * eps;
    // nearbyint under the default rounding mode is round-half-to-even, which
    // is the frozen tie rule for lattice coordinates.
    double re = std::nearbyint(z.real() / spacing) * spacing;
    double im = std::nearbyint(z.imag() / spacing) * spacing;
    return {re, im};
}

double pretentious_distance(const PretentiousQuery& q, int threads) {
    if (q.x < 2) throw std::invalid_argument("pretentious_distance: x must be >= 2");
    if (q.chi.kind() != MultSpec::Kind::Character)
        throw std::invalid_argument("pretentious_distance: chi must be a Dirichlet character");
    if (!std::isfinite(q.t)) throw std::invalid_argument("pretentious_distance: t must be finite");

    constexpr std::uint64_t chunk = 1u << 24;
    auto partials = map_segments<kahan_sum>(
        2, q.x + 1, chunk, threads, [&](std::uint64_t, std::uint64_t a, std::uint64_t b) {
            kahan_sum acc;
            PrimeList pl = primes_in(a, b);
            for (std::uint64_t p : pl.primes) {
                cplx gp = q.g.at_prime_power(p, 1);
                cplx chip = q.chi.at_prime_power(p, 1);
                cplx pit = std::polar(1.0, -q.t * std::log(static_cast<double>(p)));
                double term = 1.0 - (gp * std::conj(chip) * pit).real();
                acc.add(term / static_cast<double>(p));
            }
            return acc;
        });
    kahan_sum total;
    for (const auto& part : partials) total.add(part);
    return total.value();
}

cplx convolution_remainder(const MultSpec& spec, std::uint64_t p, std::uint32_t j) {
    if (j == 0) throw std::invalid_argument("convolution_remainder: j must be >= 1");
    if (j == 1) return 0.0;  // h(p) = 0 by construction
    cplx prev = spec.at_prime_power(p, j - 1);
    return spec.at_prime_power(p, j) - spec.at_prime_power(p, 1) * prev;
}

MultSpec sample_random_mult(const MultSpec& mean, std::uint64_t seed) {
    MultSpec s(MultSpec::Kind::RandomMult);
    s.seed_ = seed;
    s.mean_ = std::make_shared<const MultSpec>(mean);
    return s;
}

}  // namespace chowla
