#pragma once

#include <cstdint>
#include <vector>

namespace chowla {

// Exactly the primes in [lo, hi), ascending.
struct PrimeList {
    std::uint64_t lo = 0;   // inclusive
    std::uint64_t hi = 0;   // exclusive
    std::vector<std::uint64_t> primes;
};

// Packed window of values in {-1, 0, +1}, two bits per entry.
// A completely-multiplicative sign window never stores 0; squarefree-sensitive
// windows use all three.
class SignWindow {
public:
    SignWindow() = default;
    SignWindow(std::uint64_t lo, std::uint64_t hi);

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint64_t size() const { return hi_ - lo_; }

    // v must be -1, 0 or +1.
    void set(std::uint64_t n, int v) {
        std::uint64_t i = n - lo_;
        std::uint64_t byte = i >> 2;
        unsigned shift = static_cast<unsigned>((i & 3) << 1);
        data_[byte] = static_cast<std::uint8_t>(
            (data_[byte] & ~(3u << shift)) | (static_cast<unsigned>(v + 1) << shift));
    }
    int get(std::uint64_t n) const {
        std::uint64_t i = n - lo_;
        return static_cast<int>((data_[i >> 2] >> ((i & 3) << 1)) & 3u) - 1;
    }

    bool operator==(const SignWindow& o) const {
        return lo_ == o.lo_ && hi_ == o.hi_ && data_ == o.data_;
    }

private:
    std::uint64_t lo_ = 0, hi_ = 0;
    std::vector<std::uint8_t> data_;
};

// Largest [lo, hi) span a single primes_in call will serve; longer ranges
// must be chunked by the caller.
inline constexpr std::uint64_t kPrimesInBudget = 1ull << 26;

// Largest sign window a single call materializes (2 bits per value
// => 32 MB at the budget).
inline constexpr std::uint64_t kSignWindowBudget = 130'000'000;

// Primes in [lo, hi). Requires 2 <= lo < hi and hi - lo <= kPrimesInBudget.
PrimeList primes_in(std::uint64_t lo, std::uint64_t hi);

// The simple sieve underlying everything: all primes <= n, ascending.
std::vector<std::uint64_t> primes_upto(std::uint64_t n);

// values[n - lo] = (-1)^{Omega(n)} for n in [lo, hi). Requires 1 <= lo < hi.
SignWindow liouville_window(std::uint64_t lo, std::uint64_t hi, int threads = 1);

// values[n - lo] = mu(n): 0 off the squarefree numbers, else (-1)^{omega(n)}.
SignWindow mobius_window(std::uint64_t lo, std::uint64_t hi, int threads = 1);

}  // namespace chowla
