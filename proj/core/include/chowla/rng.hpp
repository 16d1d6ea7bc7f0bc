#pragma once

#include <cstdint>

namespace chowla {

// Counter-based generator: a splitmix64-style finalizer applied to a keyed
// counter. Evaluation order never matters — the draw for a given key is a
// pure function of the key — so parallel consumers are reproducible by
// construction.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x517cc1b727220a95ULL));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b) ^ (c + 0x2545f4914f6cdd1dULL));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by 128-bit multiply; the bias is < 2^-64·n,
// irrelevant at the moduli used here (n is a prime below ~2^20).
inline std::uint64_t uniform_below(std::uint64_t bits, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace chowla
