#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cvlt/bigint.hpp"
#include "cvlt/bytes.hpp"
#include "cvlt/drbg.hpp"

namespace cvlt::rsa {

inline constexpr std::uint32_t kPublicExponent = 65537;
inline constexpr int kDefaultMillerRabinRounds = 40;
// PKCS#1 v1.5 type-2 framing overhead: 00 02 <at least 8 nonzero> 00.
inline constexpr std::size_t kWrapOverhead = 11;

struct RsaPublicKey {
    BigUint n;
    BigUint e;

    std::size_t bits() const noexcept { return n.bit_length(); }
    std::size_t modulus_bytes() const noexcept { return n.byte_length(); }

    friend bool operator==(const RsaPublicKey&, const RsaPublicKey&) = default;
};

struct RsaPrivateKey {
    BigUint n;
    BigUint e;
    BigUint d;
    BigUint p;
    BigUint q;

    RsaPublicKey public_key() const { return {n, e}; }
    std::size_t modulus_bytes() const noexcept { return n.byte_length(); }

    friend bool operator==(const RsaPrivateKey&, const RsaPrivateKey&) = default;
};

struct RsaKeyPair {
    RsaPublicKey pub;
    RsaPrivateKey priv;
};

// Uniform in [0, bound) by rejection sampling. bound must be nonzero.
BigUint random_below(const BigUint& bound, rng::Drbg& rng);

// Trial division by the primes below 2000, then Miller-Rabin with `rounds`
// random bases. Exact for n < 2000^2.
bool is_probable_prime(const BigUint& n, int rounds, rng::Drbg& rng);

struct KeygenOptions {
    // 512-bit moduli are rejected unless this is set.
    bool test_mode = false;
    int miller_rabin_rounds = kDefaultMillerRabinRounds;
    // Caps the number of prime candidates drawn; unlimited when empty.
    std::optional<std::size_t> max_candidates;
};

// bits must be 512 (test mode only), 1024, 2048 or 3072. Primes have their
// top two bits set so n has exactly `bits` bits; e = 65537 and
// d = e^-1 mod lcm(p-1, q-1).
RsaKeyPair keygen(std::size_t bits, rng::Drbg& rng, const KeygenOptions& options = {});

// Throws Errc::capacity when payload exceeds modulus_bytes - 11. Output is
// exactly modulus_bytes long.
Bytes wrap_key(ByteView payload, const RsaPublicKey& pub, rng::Drbg& rng);
// Throws Errc::unwrap on any length, range or framing problem.
Bytes unwrap_key(ByteView blob, const RsaPrivateKey& priv);

// Line-oriented text: "n=<hex>" then "e=<hex>", and for private keys also
// d, p, q. Lowercase hex without leading zeros, one field per line.
std::string serialize_public(const RsaPublicKey& pub);
std::string serialize_private(const RsaPrivateKey& priv);
// Throw Errc::parse on malformed text and Errc::validation when the numbers
// violate the key invariants.
RsaPublicKey parse_public(std::string_view text);
RsaPrivateKey parse_private(std::string_view text);

// n odd, e odd, 2 < e < n.
void validate(const RsaPublicKey& pub);
// Public checks plus n = p*q and e*d = 1 mod lcm(p-1, q-1).
void validate(const RsaPrivateKey& priv);

}  // namespace cvlt::rsa
