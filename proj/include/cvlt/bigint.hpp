#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvlt/bytes.hpp"

namespace cvlt::rsa {

// Arbitrary-precision nonnegative integer. Little-endian 32-bit limbs with no
// high zero limbs; zero is the empty limb vector.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v);  // NOLINT(google-explicit-constructor)

    static BigUint from_bytes_be(ByteView bytes);
    // Minimal big-endian encoding (zero encodes as no bytes).
    Bytes to_bytes_be() const;
    // Left-padded to exactly len bytes; throws Errc::capacity if it does not fit.
    Bytes to_bytes_be(std::size_t len) const;

    // Throws Errc::invalid_argument on an empty string or non-hex digit.
    static BigUint from_hex(std::string_view hex);
    // Lowercase, no leading zeros, "0" for zero.
    std::string to_hex() const;
    std::string to_decimal() const;

    bool is_zero() const noexcept { return limbs_.empty(); }
    bool is_odd() const noexcept { return !limbs_.empty() && (limbs_[0] & 1); }
    std::size_t bit_length() const noexcept;
    std::size_t byte_length() const noexcept { return (bit_length() + 7) / 8; }
    bool test_bit(std::size_t i) const noexcept;
    void set_bit(std::size_t i);
    std::uint64_t to_u64() const noexcept;
    const std::vector<std::uint32_t>& limbs() const noexcept { return limbs_; }

    friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) noexcept;
    friend bool operator==(const BigUint& a, const BigUint& b) noexcept = default;

    BigUint& operator+=(const BigUint& rhs);
    // Throws Errc::invalid_argument if rhs > *this.
    BigUint& operator-=(const BigUint& rhs);
    BigUint& operator<<=(std::size_t bits);
    BigUint& operator>>=(std::size_t bits);

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
    friend BigUint operator*(const BigUint& a, const BigUint& b);
    friend BigUint operator/(const BigUint& a, const BigUint& b) { return divmod(a, b).first; }
    friend BigUint operator%(const BigUint& a, const BigUint& b) { return divmod(a, b).second; }
    friend BigUint operator<<(BigUint a, std::size_t bits) { return a <<= bits; }
    friend BigUint operator>>(BigUint a, std::size_t bits) { return a >>= bits; }

    // Throws Errc::invalid_argument on division by zero.
    static std::pair<BigUint, BigUint> divmod(const BigUint& a, const BigUint& b);
    std::uint32_t mod_u32(std::uint32_t m) const;

private:
    explicit BigUint(std::vector<std::uint32_t> limbs) : limbs_(std::move(limbs)) { trim(); }
    void trim() noexcept;

    std::vector<std::uint32_t> limbs_;
};

// base^exp mod m by left-to-right square-and-multiply (Montgomery products
// for odd m). Throws Errc::invalid_argument when m < 2.
BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& m);

BigUint gcd(BigUint a, BigUint b);
BigUint lcm(const BigUint& a, const BigUint& b);

// Extended Euclid. Empty when gcd(a, m) != 1.
std::optional<BigUint> mod_inverse(const BigUint& a, const BigUint& m);

}  // namespace cvlt::rsa
