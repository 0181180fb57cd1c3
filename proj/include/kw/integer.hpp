#pragma once

#include <kw/error.hpp>

#include <cstdint>
#include <numeric>
#include <string>

namespace kw {

inline bool is_prime(std::int64_t n) noexcept {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// base^exp, throwing a resource error instead of overflowing int64.
inline std::int64_t checked_pow(std::int64_t base, int exp) {
    std::int64_t result = 1;
    for (int k = 0; k < exp; ++k) {
        if (base != 0 && result > INT64_MAX / base)
            fail(ErrorKind::resource, "integer overflow computing " + std::to_string(base) + "^" + std::to_string(exp));
        result *= base;
    }
    return result;
}

/// Representative of n in [0, m).
constexpr std::int64_t mod_floor(std::int64_t n, std::int64_t m) noexcept {
    std::int64_t r = n % m;
    return r < 0 ? r + m : r;
}

constexpr std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) noexcept {
    return static_cast<std::int64_t>(
        mod_floor(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m), m));
}

/// Cyclic index i mod n in [0, n).
constexpr int cyc(int i, int n) noexcept { return static_cast<int>(mod_floor(i, n)); }

/// The modulus p^k - 1 of the exponent group of a niveau-k tame character.
inline std::int64_t tame_modulus(int p, int k) { return checked_pow(p, k) - 1; }

/// sum_{i<k} p^{k-1-i} digits[i] reduced mod p^k - 1.
template <class Range>
std::int64_t weighted_exponent(int p, const Range &digits) {
    const int k = static_cast<int>(std::size(digits));
    const std::int64_t m = tame_modulus(p, k);
    std::int64_t acc = 0;
    for (auto d : digits) acc = mod_floor(mul_mod(acc, p, m) + mod_floor(static_cast<std::int64_t>(d), m), m);
    return acc;
}

} // namespace kw
