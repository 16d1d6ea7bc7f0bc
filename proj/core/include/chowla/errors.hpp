#pragma once

#include <stdexcept>
#include <string>

namespace chowla {

// A request exceeded a compiled-in resource budget (window length, grid size,
// memory). Distinct from invalid_argument: the input is well-formed, just too
// large for this build.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// The interval (eps^2 H / 2, eps^2 H] contains no primes. Callers that can
// proceed with an empty window must opt in explicitly; the default is loud.
class empty_prime_window_error : public std::runtime_error {
public:
    explicit empty_prime_window_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chowla
