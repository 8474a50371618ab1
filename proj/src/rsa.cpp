#include "cvlt/rsa.hpp"

#include <map>
#include <string>
#include <vector>

#include "cvlt/error.hpp"

namespace cvlt::rsa {

namespace {

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 2000;
        std::vector<bool> composite(limit, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i < limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint32_t j = i * i; j < limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

bool miller_rabin_round(const BigUint& n, const BigUint& n_minus_1, const BigUint& odd_part, std::size_t twos,
                        const BigUint& base) {
    BigUint x = mod_pow(base, odd_part, n);
    if (x == BigUint(1) || x == n_minus_1) return true;
    for (std::size_t i = 1; i < twos; ++i) {
        x = (x * x) % n;
        if (x == n_minus_1) return true;
        if (x == BigUint(1)) return false;
    }
    return false;
}

BigUint random_prime_candidate(std::size_t bits, rng::Drbg& rng) {
    Bytes raw = rng.generate((bits + 7) / 8);
    BigUint c = BigUint::from_bytes_be(raw);
    if (c.bit_length() > bits) c = c % (BigUint(1) << bits);
    c.set_bit(bits - 1);
    c.set_bit(bits - 2);
    c.set_bit(0);
    return c;
}

}  // namespace

BigUint random_below(const BigUint& bound, rng::Drbg& rng) {
    if (bound.is_zero()) throw Error(Errc::invalid_argument, "random_below needs a nonzero bound");
    const std::size_t bits = bound.bit_length();
    const BigUint mask_limit = BigUint(1) << bits;
    for (;;) {
        BigUint c = BigUint::from_bytes_be(rng.generate((bits + 7) / 8));
        if (c >= mask_limit) c = c % mask_limit;
        if (c < bound) return c;
    }
}

bool is_probable_prime(const BigUint& n, int rounds, rng::Drbg& rng) {
    if (rounds < 1) throw Error(Errc::invalid_argument, "Miller-Rabin needs at least one round");
    if (n < BigUint(2)) return false;
    for (const std::uint32_t p : small_primes()) {
        if (n == BigUint(p)) return true;
        if (n.mod_u32(p) == 0) return false;
        if (BigUint(std::uint64_t{p} * p) > n) return true;
    }

    const BigUint n_minus_1 = n - BigUint(1);
    BigUint odd_part = n_minus_1;
    std::size_t twos = 0;
    while (!odd_part.is_odd()) {
        odd_part >>= 1;
        ++twos;
    }
    const BigUint base_span = n - BigUint(3);  // bases drawn from [2, n-2]
    for (int i = 0; i < rounds; ++i) {
        const BigUint base = random_below(base_span, rng) + BigUint(2);
        if (!miller_rabin_round(n, n_minus_1, odd_part, twos, base)) return false;
    }
    return true;
}

RsaKeyPair keygen(std::size_t bits, rng::Drbg& rng, const KeygenOptions& options) {
    if (bits != 512 && bits != 1024 && bits != 2048 && bits != 3072)
        throw Error(Errc::invalid_argument, "RSA modulus must be 1024, 2048 or 3072 bits, got " + std::to_string(bits));
    if (bits == 512 && !options.test_mode)
        throw Error(Errc::invalid_argument, "512-bit RSA keys are only available in test mode");

    const BigUint e(kPublicExponent);
    std::size_t candidates = 0;
    auto next_prime = [&]() {
        for (;;) {
            if (options.max_candidates && candidates >= *options.max_candidates)
                throw Error(Errc::invalid_argument, "RSA key generation exceeded its candidate bound");
            ++candidates;
            BigUint c = random_prime_candidate(bits / 2, rng);
            // e is prime, so gcd(e, (p-1)(q-1)) = 1 iff e divides neither factor.
            if ((c - BigUint(1)).mod_u32(kPublicExponent) == 0) continue;
            if (is_probable_prime(c, options.miller_rabin_rounds, rng)) return c;
        }
    };

    for (;;) {
        BigUint p = next_prime();
        BigUint q = next_prime();
        if (p == q) continue;
        if (p < q) std::swap(p, q);
        BigUint n = p * q;
        if (n.bit_length() != bits) continue;
        const BigUint lambda = lcm(p - BigUint(1), q - BigUint(1));
        auto d = mod_inverse(e, lambda);
        if (!d) continue;
        RsaPrivateKey priv{n, e, std::move(*d), std::move(p), std::move(q)};
        RsaPublicKey pub{std::move(n), e};
        return {std::move(pub), std::move(priv)};
    }
}

Bytes wrap_key(ByteView payload, const RsaPublicKey& pub, rng::Drbg& rng) {
    const std::size_t k = pub.modulus_bytes();
    if (k < kWrapOverhead || payload.size() > k - kWrapOverhead)
        throw Error(Errc::capacity, "payload of " + std::to_string(payload.size()) + " bytes exceeds the " +
                                        std::to_string(k < kWrapOverhead ? 0 : k - kWrapOverhead) +
                                        "-byte capacity of this RSA key");
    Bytes em;
    em.reserve(k);
    em.push_back(0x00);
    em.push_back(0x02);
    const std::size_t ps_len = k - 3 - payload.size();
    while (em.size() < 2 + ps_len) {
        for (auto b : rng.generate(ps_len - (em.size() - 2)))
            if (b != 0) em.push_back(b);
    }
    em.push_back(0x00);
    append(em, payload);
    return mod_pow(BigUint::from_bytes_be(em), pub.e, pub.n).to_bytes_be(k);
}

namespace {

// c^d mod n through the prime factors (CRT), falling back to the plain
// exponent when the factors do not match n.
BigUint private_op(const BigUint& c, const RsaPrivateKey& priv) {
    if (priv.p * priv.q != priv.n || priv.p < BigUint(3) || priv.q < BigUint(3)) return mod_pow(c, priv.d, priv.n);
    const auto q_inv = mod_inverse(priv.q % priv.p, priv.p);
    if (!q_inv) return mod_pow(c, priv.d, priv.n);
    const BigUint one(1);
    const BigUint m1 = mod_pow(c % priv.p, priv.d % (priv.p - one), priv.p);
    const BigUint m2 = mod_pow(c % priv.q, priv.d % (priv.q - one), priv.q);
    const BigUint diff = (m1 + priv.p - (m2 % priv.p)) % priv.p;
    return m2 + ((diff * *q_inv) % priv.p) * priv.q;
}

}  // namespace

Bytes unwrap_key(ByteView blob, const RsaPrivateKey& priv) {
    const std::size_t k = priv.modulus_bytes();
    if (blob.size() != k) throw Error(Errc::unwrap, "wrapped key has the wrong length");
    const BigUint c = BigUint::from_bytes_be(blob);
    if (c >= priv.n) throw Error(Errc::unwrap, "wrapped key is out of range");
    const Bytes em = private_op(c, priv).to_bytes_be(k);

    // Scan the whole frame before deciding.
    bool bad = em.size() < kWrapOverhead || em[0] != 0x00 || em[1] != 0x02;
    std::size_t sep = 0;
    for (std::size_t i = 2; i < em.size(); ++i) {
        if (sep == 0 && em[i] == 0x00) sep = i;
    }
    bad = bad || sep == 0 || sep < 10;
    if (bad) throw Error(Errc::unwrap, "wrapped key frame is malformed");
    return Bytes(em.begin() + static_cast<std::ptrdiff_t>(sep + 1), em.end());
}

namespace {

std::map<std::string, BigUint> parse_fields(std::string_view text) {
    std::map<std::string, BigUint> fields;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::parse, "line " + std::to_string(line_no) + ": expected name=value");
        std::string name(line.substr(0, eq));
        if (name != "n" && name != "e" && name != "d" && name != "p" && name != "q")
            throw Error(Errc::parse, "line " + std::to_string(line_no) + ": unknown field '" + name + "'");
        if (fields.count(name)) throw Error(Errc::parse, "line " + std::to_string(line_no) + ": duplicate field");
        try {
            fields.emplace(std::move(name), BigUint::from_hex(line.substr(eq + 1)));
        } catch (const Error&) {
            throw Error(Errc::parse, "line " + std::to_string(line_no) + ": invalid hex value");
        }
    }
    return fields;
}

const BigUint& require(const std::map<std::string, BigUint>& fields, const char* name) {
    auto it = fields.find(name);
    if (it == fields.end()) throw Error(Errc::parse, std::string("missing field '") + name + "'");
    return it->second;
}

}  // namespace

std::string serialize_public(const RsaPublicKey& pub) {
    return "n=" + pub.n.to_hex() + "\ne=" + pub.e.to_hex() + "\n";
}

std::string serialize_private(const RsaPrivateKey& priv) {
    return "n=" + priv.n.to_hex() + "\ne=" + priv.e.to_hex() + "\nd=" + priv.d.to_hex() + "\np=" + priv.p.to_hex() +
           "\nq=" + priv.q.to_hex() + "\n";
}

RsaPublicKey parse_public(std::string_view text) {
    auto fields = parse_fields(text);
    if (fields.size() != 2) throw Error(Errc::parse, "public key must hold exactly n and e");
    RsaPublicKey pub{require(fields, "n"), require(fields, "e")};
    validate(pub);
    return pub;
}

RsaPrivateKey parse_private(std::string_view text) {
    auto fields = parse_fields(text);
    RsaPrivateKey priv{require(fields, "n"), require(fields, "e"), require(fields, "d"), require(fields, "p"),
                       require(fields, "q")};
    validate(priv);
    return priv;
}

void validate(const RsaPublicKey& pub) {
    if (!pub.n.is_odd()) throw Error(Errc::validation, "RSA modulus must be odd");
    if (!pub.e.is_odd() || pub.e <= BigUint(2) || pub.e >= pub.n)
        throw Error(Errc::validation, "RSA public exponent must be odd with 2 < e < n");
}

void validate(const RsaPrivateKey& priv) {
    validate(priv.public_key());
    if (priv.p * priv.q != priv.n) throw Error(Errc::validation, "RSA modulus is not p*q");
    if (priv.p < BigUint(2) || priv.q < BigUint(2)) throw Error(Errc::validation, "RSA primes are degenerate");
    const BigUint lambda = lcm(priv.p - BigUint(1), priv.q - BigUint(1));
    if ((priv.e * priv.d) % lambda != BigUint(1))
        throw Error(Errc::validation, "RSA private exponent does not invert e");
}

}  // namespace cvlt::rsa
