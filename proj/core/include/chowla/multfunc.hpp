#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "chowla/sieve.hpp"

namespace chowla {

using cplx = std::complex<double>;

// g(n) evaluated on [lo, hi); every magnitude <= 1 up to float tolerance.
struct ComplexWindow {
    std::uint64_t lo = 0, hi = 0;
    std::vector<cplx> values;

    cplx at(std::uint64_t n) const { return values[n - lo]; }
};

// A bounded multiplicative function g: N -> closed unit disk, described by
// structure rather than by a table: built-in sign functions, Dirichlet
// characters given as value tables, the archimedean twist n^{it}, pointwise
// products, a seeded random multiplicative model, and the constant 1.
class MultSpec {
public:
    enum class Kind {
        Liouville,        // completely multiplicative, -1 at every prime
        Mobius,           // -1 at primes, 0 at higher prime powers
        MobiusSquared,    // squarefree indicator
        Character,        // value table on Z/qZ, completely multiplicative
        Twist,            // n^{it} = exp(i t ln n)
        Product,          // pointwise product of children
        RandomMult,       // independent +-1 draws at prime powers, seeded
        Constant,         // 1 everywhere
    };

    static MultSpec liouville();
    static MultSpec mobius();
    static MultSpec mobius_squared();
    static MultSpec constant_one();
    // table[r] is the value at residue r; requires |table| = q >= 1,
    // magnitudes <= 1, and table[r] = 0 exactly when gcd(r, q) > 1.
    static MultSpec dirichlet_character(std::uint64_t q, std::vector<cplx> table);
    static MultSpec principal_character(std::uint64_t q);
    static MultSpec archimedean_twist(double t);
    static MultSpec pointwise_product(std::vector<MultSpec> factors);

    Kind kind() const { return kind_; }
    double twist_t() const { return t_; }
    std::uint64_t character_modulus() const { return q_; }

    // True when g(mn) = g(m) g(n) for all m, n, not just coprime pairs.
    bool completely_multiplicative() const;
    // True when every value lies in {-1, 0, +1}.
    bool sign_valued() const;

    // Value at a prime power p^j, j >= 1. This is the defining data of the
    // function; everything else factors through it.
    cplx at_prime_power(std::uint64_t p, std::uint32_t j) const;

    // Value at any n >= 1 by trial division; intended for small n and tests,
    // not window scans.
    cplx at(std::uint64_t n) const;

    // g on [lo, hi), via the sieve for sign-valued kinds, closed forms for
    // characters/twists, and a factoring sweep otherwise.
    ComplexWindow evaluate_window(std::uint64_t lo, std::uint64_t hi, int threads = 1) const;

private:
    MultSpec(Kind k) : kind_(k) {}

    Kind kind_;
    double t_ = 0.0;                           // Twist
    std::uint64_t q_ = 0;                      // Character
    std::vector<cplx> table_;                  // Character
    std::vector<MultSpec> factors_;            // Product
    std::uint64_t seed_ = 0;                   // RandomMult
    std::shared_ptr<const MultSpec> mean_;     // RandomMult

    friend MultSpec sample_random_mult(const MultSpec& mean, std::uint64_t seed);
};

// The pretentious distance between g and the character twist chi(n) n^{it}:
//     sum over primes p <= x of (1 - Re g(p) conj(chi(p)) p^{-it}) / p.
struct PretentiousQuery {
    MultSpec g;
    MultSpec chi;       // Character kind
    double t = 0.0;
    std::uint64_t x = 2;
};

double pretentious_distance(const PretentiousQuery& q, int threads = 1);

// Nearest point of the lattice eps^2 * Z[i]; coordinate ties round half to
// even in lattice units. Error is at most eps^2 * sqrt(2)/2.
cplx discretise(cplx z, double eps);

// h(p^j) = g(p^j) - g(p) g(p^{j-1}), the Dirichlet-convolution remainder of g
// against its completely multiplicative extension at primes. h(p) = 0 always;
// identically 0 for completely multiplicative g.
cplx convolution_remainder(const MultSpec& spec, std::uint64_t p, std::uint32_t j);

// A realization of the random model: independent +-1 values at prime powers
// p^j with E[value] = mean(p^j), deterministic in (seed, p, j). The mean spec
// must evaluate to reals in [-1, 1].
MultSpec sample_random_mult(const MultSpec& mean, std::uint64_t seed);

}  // namespace chowla
