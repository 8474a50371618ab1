#pragma once

#include <array>
#include <cstdint>

// Arithmetic in GF(2^8) with the Rijndael reduction polynomial
// x^8 + x^4 + x^3 + x + 1. A byte holds the coefficients of a polynomial of
// degree at most 7, bit i being the coefficient of x^i.
namespace cvlt::gf256 {

using FieldElement = std::uint8_t;

inline constexpr unsigned kReductionPolynomial = 0x11b;
inline constexpr FieldElement kAffineConstant = 0x63;

constexpr FieldElement gf_add(FieldElement a, FieldElement b) noexcept {
    return static_cast<FieldElement>(a ^ b);
}

// Multiplication by x.
constexpr FieldElement xtime(FieldElement a) noexcept {
    return static_cast<FieldElement>((a << 1) ^ ((a & 0x80) ? 0x1b : 0x00));
}

// Shift-and-add over xtime.
constexpr FieldElement gf_mul(FieldElement a, FieldElement b) noexcept {
    FieldElement product = 0;
    while (b != 0) {
        if (b & 1) product ^= a;
        a = xtime(a);
        b >>= 1;
    }
    return product;
}

// a^254 = a^-1 for nonzero a; maps 0 to 0, which keeps the S-box total.
constexpr FieldElement gf_inv(FieldElement a) noexcept {
    FieldElement result = 1;
    FieldElement base = a;
    for (unsigned e = 254; e != 0; e >>= 1) {
        if (e & 1) result = gf_mul(result, base);
        base = gf_mul(base, base);
    }
    return a == 0 ? 0 : result;
}

// The fixed bit-matrix of the S-box: bit i of the output is
// b[i] ^ b[i+4] ^ b[i+5] ^ b[i+6] ^ b[i+7] ^ c[i] (indices mod 8).
constexpr FieldElement affine_transform(FieldElement b) noexcept {
    auto rotl = [](FieldElement v, int n) {
        return static_cast<FieldElement>((v << n) | (v >> (8 - n)));
    };
    return static_cast<FieldElement>(b ^ rotl(b, 1) ^ rotl(b, 2) ^ rotl(b, 3) ^ rotl(b, 4) ^ kAffineConstant);
}

struct SboxTables {
    std::array<std::uint8_t, 256> forward{};
    std::array<std::uint8_t, 256> inverse{};
};

SboxTables build_sbox();

// Process-wide tables, built once on first use and checked against the
// known entries S(0x00) = 0x63 and S(0x53) = 0xed.
const SboxTables& sbox();

}  // namespace cvlt::gf256
