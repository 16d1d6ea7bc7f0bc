#include "chowla/logmeasure.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "chowla/multfunc.hpp"
#include "doctest.h"
#include "oracles.hpp"

using chowla::CorrelationParams;
using chowla::cplx;
using chowla::LogWindow;
using chowla::MultSpec;
using chowla::Weighting;

namespace {

// Direct harmonic-weighted tally over the window, long double, no segments.
template <class Fn>
long double direct_weighted_sum(const LogWindow& w, Fn&& f) {
    long double s = 0.0L;
    for (std::uint64_t n = w.lo + 1; n <= w.x; ++n) s += f(n) / static_cast<long double>(n);
    return s;
}

}  // namespace

TEST_CASE("make_log_window geometry, Z value, and validation") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    CHECK(w.lo == 2);
    CHECK(w.size() == 8);
    CHECK(w.Z == doctest::Approx(static_cast<double>(oracle::harmonic_between(2, 10)))
                     .epsilon(1e-14));

    CHECK_THROWS_AS(chowla::make_log_window(10, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(chowla::make_log_window(5, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(chowla::make_log_window(10, 1.0), std::invalid_argument);  // empty window
}

TEST_CASE("Z stays within 2/lo of ln omega") {
    for (auto [x, om] : std::vector<std::pair<std::uint64_t, double>>{
             {100'000, 1000.0}, {1'000'000, 317.0}, {12'345, 100.0}, {99'999, 9999.0}}) {
        LogWindow w = chowla::make_log_window(x, om);
        REQUIRE(w.lo >= 10);
        CHECK(w.Z >= std::log(om) - 2.0 / static_cast<double>(w.lo));
        CHECK(w.Z <= std::log(om) + 2.0 / static_cast<double>(w.lo));
    }
}

TEST_CASE("Z regression values at the 1e8 scale") {
    CHECK(chowla::make_log_window(100'000'000, 1e4, 4).Z ==
          doctest::Approx(9.210290377809516).epsilon(1e-13));
    CHECK(chowla::make_log_window(100'000'000, 1e6, 4).Z ==
          doctest::Approx(13.810518896214312).epsilon(1e-13));
}

TEST_CASE("make_log_window is identical across thread counts") {
    LogWindow a = chowla::make_log_window(2'000'000, 500.0, 1);
    LogWindow b = chowla::make_log_window(2'000'000, 500.0, 4);
    CHECK(a.Z == b.Z);
    CHECK(a.lo == b.lo);
}

TEST_CASE("log_expectation examples") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    cplx even = chowla::log_expectation(w, 1, [](std::uint64_t n) {
        return cplx{n % 2 == 0 ? 1.0 : 0.0, 0.0};
    });
    // 1/4 + 1/6 + 1/8 + 1/10 over Z = 0.64167/1.42897.
    CHECK(even.real() == doctest::Approx(0.641666666666667 / 1.428968253968254).epsilon(1e-12));
    CHECK(even.real() == doctest::Approx(0.4491).epsilon(1e-3));
    CHECK(even.imag() == 0.0);

    cplx unit = chowla::log_expectation(w, 1, [](std::uint64_t) { return cplx{1.0, 0.0}; });
    CHECK(unit.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(unit) <= 1.0 + 1e-12);
}

TEST_CASE("weights sum to one on large windows") {
    for (auto [x, om] : std::vector<std::pair<std::uint64_t, double>>{
             {1000, 30.0}, {1'000'000, 1e3}, {5'000'000, 7.5}}) {
        LogWindow w = chowla::make_log_window(x, om, 3);
        cplx unit = chowla::log_expectation(w, 3, [](std::uint64_t) { return cplx{1.0, 0.0}; });
        CHECK(unit.real() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("correlation params validation") {
    CHECK_THROWS_AS(chowla::validate(CorrelationParams{0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(chowla::validate(CorrelationParams{1, 0, 0}), std::invalid_argument);
    CHECK_NOTHROW(chowla::validate(CorrelationParams{3, -2, -1}));
}

TEST_CASE("correlation2 fixed examples") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    auto r = chowla::correlation2(MultSpec::liouville(), MultSpec::liouville(), {1, 0, 1}, w);
    // -1/3 - 1/4 - 1/5 - 1/6 + 1/7 - 1/8 + 1/9 - 1/10, from the sign table.
    CHECK(r.raw.real() == doctest::Approx(-0.9210317460317460).epsilon(1e-12));
    CHECK(r.raw.imag() == 0.0);
    CHECK(r.normalized.real() == doctest::Approx(-0.9210317460317460 / w.Z).epsilon(1e-12));
    CHECK(r.skipped == 0);
    CHECK(std::abs(r.normalized) <= 1.0 + 1e-12);

    auto ones =
        chowla::correlation2(MultSpec::constant_one(), MultSpec::constant_one(), {2, 3, 4}, w);
    CHECK(ones.normalized.real() == doctest::Approx(1.0).epsilon(1e-12));

    auto twist0 = chowla::correlation2(MultSpec::archimedean_twist(0.0),
                                       MultSpec::archimedean_twist(-0.0), {1, 0, 1}, w);
    CHECK(twist0.normalized.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(twist0.normalized.imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("correlation2 against a direct oracle on a generic configuration") {
    LogWindow w = chowla::make_log_window(2000, 50.0);
    auto r = chowla::correlation2(MultSpec::liouville(), MultSpec::mobius(), {3, 2, 5}, w);
    long double expect = direct_weighted_sum(w, [](std::uint64_t n) {
        return static_cast<long double>(oracle::liouville(3 * n + 2) * oracle::mobius(3 * n + 7));
    });
    CHECK(r.raw.real() == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
    CHECK(r.skipped == 0);
}

TEST_CASE("correlation2 skips arguments below one and counts them") {
    LogWindow w = chowla::make_log_window(10, 5.0);  // n in 3..10
    auto r = chowla::correlation2(MultSpec::liouville(), MultSpec::liouville(), {1, -5, 1}, w);
    CHECK(r.skipped == 3);  // n = 3, 4, 5 give n-5 < 1
    long double expect = 0.0L;
    for (std::uint64_t n = 6; n <= 10; ++n)
        expect += static_cast<long double>(oracle::liouville(n - 5) * oracle::liouville(n - 4)) /
                  static_cast<long double>(n);
    CHECK(r.raw.real() == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));

    auto back = chowla::correlation2(MultSpec::liouville(), MultSpec::liouville(), {1, 0, -1}, w);
    CHECK(back.skipped == 0);  // n-1 >= 2 throughout
}

TEST_CASE("correlation2 natural weighting") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    auto r = chowla::correlation2(MultSpec::constant_one(), MultSpec::constant_one(), {1, 0, 1},
                                  w, 1, Weighting::natural);
    CHECK(r.raw.real() == doctest::Approx(8.0).epsilon(1e-14));  // one per window element
    CHECK(r.normalized.real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation2 is identical across thread counts") {
    LogWindow w = chowla::make_log_window(2'000'000, 1e3, 1);
    auto r1 = chowla::correlation2(MultSpec::liouville(), MultSpec::liouville(), {1, 0, 1}, w, 1);
    auto r4 = chowla::correlation2(MultSpec::liouville(), MultSpec::liouville(), {1, 0, 1}, w, 4);
    CHECK(r1.raw == r4.raw);
    CHECK(r1.normalized == r4.normalized);
    CHECK(r1.skipped == r4.skipped);
}

TEST_CASE("correlation3 examples and oracle") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    auto ones = chowla::correlation3(MultSpec::constant_one(), MultSpec::constant_one(),
                                     MultSpec::constant_one(), {0, 1, 2}, w);
    CHECK(ones.normalized.real() == doctest::Approx(1.0).epsilon(1e-12));

    auto lll = chowla::correlation3(MultSpec::liouville(), MultSpec::liouville(),
                                    MultSpec::liouville(), {0, 1, 2}, w);
    long double expect = direct_weighted_sum(w, [](std::uint64_t n) {
        return static_cast<long double>(oracle::liouville(n) * oracle::liouville(n + 1) *
                                        oracle::liouville(n + 2));
    });
    CHECK(lll.raw.real() == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));

    // Cubing a sign leaves it alone, so the zero-shift triple collapses.
    auto cube = chowla::correlation3(MultSpec::liouville(), MultSpec::liouville(),
                                     MultSpec::liouville(), {0, 0, 0}, w);
    long double lam_sum = direct_weighted_sum(
        w, [](std::uint64_t n) { return static_cast<long double>(oracle::liouville(n)); });
    CHECK(cube.raw.real() == doctest::Approx(static_cast<double>(lam_sum)).epsilon(1e-12));
}

TEST_CASE("correlation3 negative shift skipping and determinism") {
    LogWindow w = chowla::make_log_window(10, 10.0);  // n in 2..10
    auto r = chowla::correlation3(MultSpec::liouville(), MultSpec::liouville(),
                                  MultSpec::liouville(), {-2, 0, 1}, w);
    CHECK(r.skipped == 1);  // n = 2 gives n-2 < 1
    long double expect = 0.0L;
    for (std::uint64_t n = 3; n <= 10; ++n)
        expect += static_cast<long double>(oracle::liouville(n - 2) * oracle::liouville(n) *
                                           oracle::liouville(n + 1)) /
                  static_cast<long double>(n);
    CHECK(r.raw.real() == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));

    LogWindow big = chowla::make_log_window(1'500'000, 400.0, 1);
    auto a = chowla::correlation3(MultSpec::liouville(), MultSpec::mobius(),
                                  MultSpec::liouville(), {0, 3, 7}, big, 1);
    auto b = chowla::correlation3(MultSpec::liouville(), MultSpec::mobius(),
                                  MultSpec::liouville(), {0, 3, 7}, big, 4);
    CHECK(a.raw == b.raw);
    CHECK(a.skipped == b.skipped);
}

TEST_CASE("sign pattern indexing round-trips") {
    using chowla::SignPatternTally;
    for (int k = 1; k <= 4; ++k) {
        std::size_t total = 1;
        for (int i = 0; i < k; ++i) total *= 3;
        for (std::size_t idx = 0; idx < total; ++idx) {
            auto pat = SignPatternTally::pattern_of(idx, k);
            REQUIRE(pat.size() == static_cast<std::size_t>(k));
            for (int d : pat) CHECK((d == -1 || d == 0 || d == 1));
            CHECK(SignPatternTally::index_of(pat) == idx);
        }
    }
    // First entry is the least significant digit.
    CHECK(SignPatternTally::index_of({1, -1}) == 2);
    CHECK(SignPatternTally::index_of({-1, 1}) == 6);
}

TEST_CASE("sign_pattern_density constant and validation") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    auto tally = chowla::sign_pattern_density(MultSpec::constant_one(), 1, w);
    CHECK(tally.at({1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tally.at({0}) == 0.0);
    CHECK(tally.at({-1}) == 0.0);

    CHECK_THROWS_AS(chowla::sign_pattern_density(MultSpec::constant_one(), 0, w),
                    std::invalid_argument);
    CHECK_THROWS_AS(chowla::sign_pattern_density(MultSpec::constant_one(), 9, w),
                    std::invalid_argument);
    CHECK_THROWS_AS(chowla::sign_pattern_density(MultSpec::archimedean_twist(1.0), 2, w),
                    std::invalid_argument);
}

TEST_CASE("sign_pattern_density against a direct tally") {
    LogWindow w = chowla::make_log_window(10'000, 100.0);
    auto tally = chowla::sign_pattern_density(MultSpec::mobius(), 2, w, 2);
    long double sum = 0.0L;
    for (double d : tally.density) {
        CHECK(d >= 0.0);
        sum += d;
    }
    CHECK(static_cast<double>(sum) == doctest::Approx(1.0).epsilon(1e-12));
    for (int d1 : {-1, 0, 1})
        for (int d2 : {-1, 0, 1}) {
            long double expect = direct_weighted_sum(w, [&](std::uint64_t n) {
                return oracle::mobius(n) == d1 && oracle::mobius(n + 1) == d2 ? 1.0L : 0.0L;
            });
            CHECK(tally.at({d1, d2}) ==
                  doctest::Approx(static_cast<double>(expect) / w.Z).epsilon(1e-11));
        }
}

TEST_CASE("sign_pattern_density marginal over the second coordinate") {
    LogWindow w = chowla::make_log_window(10'000, 100.0);
    auto two = chowla::sign_pattern_density(MultSpec::mobius(), 2, w, 2);
    auto one = chowla::sign_pattern_density(MultSpec::mobius(), 1, w, 2);
    for (int d1 : {-1, 0, 1}) {
        double total = two.at({d1, -1}) + two.at({d1, 0}) + two.at({d1, 1});
        CHECK(total == doctest::Approx(one.at({d1})).epsilon(1e-12));
    }
}

TEST_CASE("squarefree pair densities at scale") {
    LogWindow w = chowla::make_log_window(100'000'000, 1e6, 4);
    auto tally = chowla::sign_pattern_density(MultSpec::mobius(), 2, w, 4);
    // Consecutive-non-squarefree density 1 - 2/zeta(2) + c and the
    // one-sign-pair density c/4, against their known decimal expansions.
    CHECK(tally.at({0, 0}) == doctest::Approx(0.1067).epsilon(0.01 / 0.1067));
    CHECK(tally.at({1, 1}) == doctest::Approx(0.0806).epsilon(0.01 / 0.0806));
    // Regression pins at full precision.
    CHECK(tally.at({0, 0}) == doctest::Approx(0.10657467641732238).epsilon(1e-12));
    CHECK(tally.at({1, 1}) == doctest::Approx(0.081129684217598).epsilon(1e-11));
}

TEST_CASE("dilated correlation identity for unit-modulus completely multiplicative pairs") {
    // c_p g1(p n) g2(p n + p h) = g1(n) g2(n + h) with c_p the conjugate of
    // g1(p) g2(p); exact because the p-factors cancel against c_p.
    std::vector<MultSpec> gs;
    gs.push_back(MultSpec::liouville());
    gs.push_back(MultSpec::archimedean_twist(1.3));
    std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 97, 641};
    std::mt19937_64 rng(11);
    for (const auto& g1 : gs)
        for (const auto& g2 : gs) {
            for (int i = 0; i < 10'000 / 4; ++i) {
                std::uint64_t n = 1 + rng() % 100'000;
                std::uint64_t p = primes[rng() % primes.size()];
                std::int64_t h = 1 + static_cast<std::int64_t>(rng() % 5);
                cplx cp = std::conj(g1.at(p)) * std::conj(g2.at(p));
                cplx lhs = cp * g1.at(p * n) * g2.at(p * (n + h));
                cplx rhs = g1.at(n) * g2.at(n + h);
                CHECK(std::abs(lhs - rhs) < 1e-10);
            }
        }
}

TEST_CASE("affine invariance: identical sums at q=1") {
    LogWindow w = chowla::make_log_window(5000, 40.0);
    auto lam = MultSpec::liouville();
    auto r = chowla::affine_invariance_check(w, 1, 0, 2, [&](std::uint64_t n) {
        return lam.at(n);
    });
    CHECK(r.gap == 0.0);
    auto c = chowla::affine_invariance_check(w, 1, 0, 1, [](std::uint64_t) {
        return cplx{1.0, 0.0};
    });
    CHECK(c.gap == 0.0);
}

TEST_CASE("affine invariance: even residues at the tiny scale") {
    LogWindow w = chowla::make_log_window(10, 5.0);
    auto r = chowla::affine_invariance_check(w, 2, 0, 1, [](std::uint64_t) {
        return cplx{1.0, 0.0};
    });
    CHECK(r.lhs.real() == doctest::Approx(0.4491).epsilon(1e-3));
    CHECK(r.rhs.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.gap == doctest::Approx(0.051).epsilon(0.02));

    CHECK_THROWS_AS(chowla::affine_invariance_check(
                        w, 0, 0, 1, [](std::uint64_t) { return cplx{1.0, 0.0}; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(chowla::affine_invariance_check(
                        w, 2, -100, 1, [](std::uint64_t) { return cplx{1.0, 0.0}; }),
                    std::invalid_argument);
}

TEST_CASE("affine invariance gap at scale and its trend in omega") {
    const std::uint64_t x = 100'000'000;
    auto unit = [](std::uint64_t) { return cplx{1.0, 0.0}; };
    double gap2 = chowla::affine_invariance_check(chowla::make_log_window(x, 1e2, 4), 3, 1, 4,
                                                  unit)
                      .gap;
    auto w4 = chowla::make_log_window(x, 1e4, 4);
    auto r4 = chowla::affine_invariance_check(w4, 3, 1, 4, unit);
    double gap3 = chowla::affine_invariance_check(chowla::make_log_window(x, 1e3, 4), 3, 1, 4,
                                                  unit)
                      .gap;
    // The documented bound plus the observed finite-scale value.
    CHECK(r4.gap <= 5.0 / std::log(1e4));
    CHECK(r4.gap <= 0.01);
    // Gaps shrink as the window lengthens, monotone up to noise.
    CHECK(gap2 <= 2.0 * gap3 + 1e-3);
    CHECK(gap3 <= 2.0 * r4.gap + 1e-3);
}
