#pragma once

#include <cstdint>

#include "fntrs/errors.hpp"

namespace fntrs {

// Field element of GF(65537). Values are canonical, 0 <= value <= 65536,
// which needs 17 bits: always keep elements in a 32-bit (or wider) integer.
using Fe = std::uint32_t;

namespace gf {

inline constexpr Fe prime = 65537;  // 2^16 + 1, Fermat prime
inline constexpr Fe generator = 3;  // primitive root, order 2^16

inline constexpr Fe add(Fe a, Fe b) noexcept {
    Fe s = a + b;
    return s >= prime ? s - prime : s;
}

inline constexpr Fe sub(Fe a, Fe b) noexcept {
    // computed as a + (p - b) so no intermediate goes negative
    return a >= b ? a - b : a + (prime - b);
}

inline constexpr Fe neg(Fe a) noexcept { return a == 0 ? 0 : prime - a; }

// Reduction of a 34-bit product x = hi*2^16 + lo: since 2^16 = -1 (mod p),
// x = lo - hi (mod p). hi <= 2^16 so one conditional add restores canonical range.
inline constexpr Fe mul(Fe a, Fe b) noexcept {
    std::uint64_t x = static_cast<std::uint64_t>(a) * b;
    Fe lo = static_cast<Fe>(x & 0xFFFFu);
    Fe hi = static_cast<Fe>(x >> 16);
    return lo >= hi ? lo - hi : lo + prime - hi;
}

inline constexpr Fe pow(Fe base, std::uint64_t exp) {
    if (base == 0 && exp == 0) throw Error("gf::pow: 0^0 is undefined");
    Fe result = 1;
    Fe b = base;
    while (exp > 0) {
        if (exp & 1) result = mul(result, b);
        exp >>= 1;
        if (exp) b = mul(b, b);
    }
    return result;
}

// Inverse by Fermat's little theorem, a^(p-2).
inline constexpr Fe inv(Fe a) {
    if (a == 0) throw ZeroInverse("gf::inv: zero has no inverse");
    return pow(a, prime - 2);
}

// Root of unity of exact order n: r = 3^(2^16 / n), n a power of two <= 2^16.
inline constexpr Fe root_of_unity(std::uint32_t n, bool inverse = false) {
    if (n == 0 || n > 65536 || (n & (n - 1)) != 0)
        throw InvalidTransformSize("gf::root_of_unity: size must be a power of two in [1, 65536]");
    Fe r = pow(generator, 65536u / n);
    return inverse ? inv(r) : r;
}

}  // namespace gf
}  // namespace fntrs
