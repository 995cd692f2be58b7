#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace zerosum {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual or file input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A statement or formula was requested outside the setting it is defined for.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured computation ceiling would be exceeded.
class ResourceCapExceeded : public Error {
public:
    using Error::Error;
};

namespace arith {

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b)
{
    // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

inline std::int64_t lcm(std::int64_t a, std::int64_t b)
{
    return a / std::gcd(a, b) * b;
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t f = 2; f * f <= n; ++f)
        if (n % f == 0)
            return false;
    return true;
}

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f != 0)
            continue;
        int e = 0;
        while (n % f == 0) {
            n /= f;
            ++e;
        }
        out.emplace_back(f, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

/// Returns p if n = p^e with e >= 1, otherwise 0.
inline std::int64_t prime_of_power(std::int64_t n)
{
    if (n < 2)
        return 0;
    auto f = factorize(n);
    return f.size() == 1 ? f.front().first : 0;
}

inline std::int64_t ipow(std::int64_t base, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= base;
    return r;
}

/// Inverse of a modulo m, for gcd(a, m) = 1. Returns 0 when m = 1.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m)
{
    if (m == 1)
        return 0;
    std::int64_t old_r = floor_mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t quot = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
    }
    if (old_r != 1)
        throw DomainError("mod_inverse: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return floor_mod(old_s, m);
}

} // namespace arith
} // namespace zerosum
