#define OPENSSL_SUPPRESS_DEPRECATED
#include "oracles.hpp"

#include <gmp.h>
#include <openssl/aes.h>
#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace oracle {

unsigned clmul(unsigned a, unsigned b) {
    unsigned r = 0;
    for (int i = 0; i < 8; ++i)
        if (b & (1u << i)) r ^= a << i;
    return r;
}

unsigned poly_mod(unsigned value, unsigned modulus) {
    int mdeg = 31;
    while (!(modulus & (1u << mdeg))) --mdeg;
    for (int deg = 31; deg >= mdeg; --deg)
        if (value & (1u << deg)) value ^= modulus << (deg - mdeg);
    return value;
}

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(poly_mod(clmul(a, b), 0x11b));
}

std::uint8_t gf_inv_search(std::uint8_t a) {
    if (a == 0) return 0;
    for (unsigned v = 1; v < 256; ++v)
        if (gf_mul(a, static_cast<std::uint8_t>(v)) == 1) return static_cast<std::uint8_t>(v);
    throw std::logic_error("no inverse found");
}

std::uint8_t sbox_entry(std::uint8_t x) {
    const std::uint8_t b = gf_inv_search(x);
    const std::uint8_t c = 0x63;
    std::uint8_t out = 0;
    for (int i = 0; i < 8; ++i) {
        int bit = ((b >> i) & 1) ^ ((b >> ((i + 4) % 8)) & 1) ^ ((b >> ((i + 5) % 8)) & 1) ^
                  ((b >> ((i + 6) % 8)) & 1) ^ ((b >> ((i + 7) % 8)) & 1) ^ ((c >> i) & 1);
        out |= static_cast<std::uint8_t>(bit << i);
    }
    return out;
}

namespace {

using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

const EVP_CIPHER* cipher_for(const char* mode, std::size_t key_len) {
    const std::string bits = std::to_string(key_len * 8);
    const std::string name = "aes-" + bits + "-" + mode;
    const EVP_CIPHER* c = EVP_get_cipherbyname(name.c_str());
    if (!c) throw std::runtime_error("OpenSSL cipher unavailable: " + name);
    return c;
}

Bytes run_cipher(const EVP_CIPHER* cipher, const Bytes& key, const Bytes* iv, const Bytes& in, bool encrypt,
                 bool pad) {
    CtxPtr ctx(EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
    if (!EVP_CipherInit_ex(ctx.get(), cipher, nullptr, key.data(), iv ? iv->data() : nullptr, encrypt ? 1 : 0))
        throw std::runtime_error("EVP_CipherInit_ex failed");
    EVP_CIPHER_CTX_set_padding(ctx.get(), pad ? 1 : 0);
    Bytes out(in.size() + 32);
    int len = 0, fin = 0;
    if (!EVP_CipherUpdate(ctx.get(), out.data(), &len, in.data(), static_cast<int>(in.size())))
        throw std::runtime_error("EVP_CipherUpdate failed");
    if (!EVP_CipherFinal_ex(ctx.get(), out.data() + len, &fin)) throw std::runtime_error("EVP_CipherFinal failed");
    out.resize(static_cast<std::size_t>(len + fin));
    return out;
}

}  // namespace

Bytes aes_ecb_encrypt(const Bytes& key, const Bytes& plaintext) {
    return run_cipher(cipher_for("ecb", key.size()), key, nullptr, plaintext, true, false);
}

Bytes aes_ecb_decrypt(const Bytes& key, const Bytes& ciphertext) {
    return run_cipher(cipher_for("ecb", key.size()), key, nullptr, ciphertext, false, false);
}

Bytes aes_cbc_encrypt(const Bytes& key, const Bytes& iv, const Bytes& plaintext) {
    return run_cipher(cipher_for("cbc", key.size()), key, &iv, plaintext, true, true);
}

Bytes aes_ctr_encrypt(const Bytes& key, const Bytes& iv, const Bytes& plaintext) {
    return run_cipher(cipher_for("ctr", key.size()), key, &iv, plaintext, true, false);
}

Bytes aes_cmac(const Bytes& key, const Bytes& msg) {
    EVP_MAC* mac = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
    if (!mac) throw std::runtime_error("CMAC unavailable");
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
    const std::string cipher = "AES-" + std::to_string(key.size() * 8) + "-CBC";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, const_cast<char*>(cipher.c_str()), 0),
        OSSL_PARAM_construct_end()};
    Bytes out(16);
    std::size_t out_len = 0;
    const bool ok = EVP_MAC_init(ctx, key.data(), key.size(), params) &&
                    EVP_MAC_update(ctx, msg.data(), msg.size()) &&
                    EVP_MAC_final(ctx, out.data(), &out_len, out.size());
    EVP_MAC_CTX_free(ctx);
    EVP_MAC_free(mac);
    if (!ok) throw std::runtime_error("CMAC computation failed");
    out.resize(out_len);
    return out;
}

std::vector<std::uint32_t> aes_key_schedule_words(const Bytes& key) {
    AES_KEY k;
    if (AES_set_encrypt_key(key.data(), static_cast<int>(key.size() * 8), &k) != 0)
        throw std::runtime_error("AES_set_encrypt_key failed");
    std::vector<std::uint32_t> words(k.rd_key, k.rd_key + 4 * (k.rounds + 1));
    // Some OpenSSL builds keep words in host byte order; the first word is the
    // raw key, which tells us which layout this build uses.
    const std::uint32_t first = (std::uint32_t{key[0]} << 24) | (std::uint32_t{key[1]} << 16) |
                                (std::uint32_t{key[2]} << 8) | key[3];
    if (words[0] != first)
        for (auto& w : words) w = __builtin_bswap32(w);
    return words;
}

std::uint64_t mod_pow_naive(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    for (std::uint64_t i = 0; i < exp; ++i) r = (r * (base % m)) % m;
    return r;
}

bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

struct Mpz {
    mpz_t v;
    Mpz() { mpz_init(v); }
    explicit Mpz(const std::string& hex) {
        if (mpz_init_set_str(v, hex.c_str(), 16) != 0) throw std::runtime_error("bad hex for GMP");
    }
    ~Mpz() { mpz_clear(v); }
    Mpz(const Mpz&) = delete;
    Mpz& operator=(const Mpz&) = delete;
    std::string str() const {
        std::unique_ptr<char, void (*)(void*)> s(mpz_get_str(nullptr, 16, v), free);
        return s.get();
    }
};

}  // namespace

std::string gmp_mul(const std::string& a, const std::string& b) {
    Mpz x(a), y(b), r;
    mpz_mul(r.v, x.v, y.v);
    return r.str();
}

std::string gmp_div(const std::string& a, const std::string& b) {
    Mpz x(a), y(b), r;
    mpz_fdiv_q(r.v, x.v, y.v);
    return r.str();
}

std::string gmp_mod(const std::string& a, const std::string& b) {
    Mpz x(a), y(b), r;
    mpz_fdiv_r(r.v, x.v, y.v);
    return r.str();
}

std::string gmp_powm(const std::string& base, const std::string& exp, const std::string& m) {
    Mpz b(base), e(exp), mod(m), r;
    mpz_powm(r.v, b.v, e.v, mod.v);
    return r.str();
}

std::string gmp_invert(const std::string& a, const std::string& m) {
    Mpz x(a), mod(m), r;
    if (mpz_invert(r.v, x.v, mod.v) == 0) return "";
    return r.str();
}

std::string hex(const Bytes& b) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (auto v : b) {
        out.push_back(digits[v >> 4]);
        out.push_back(digits[v & 15]);
    }
    return out;
}

Bytes unhex(const std::string& s) {
    Bytes out;
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoi(s.substr(i, 2), nullptr, 16)));
    return out;
}

}  // namespace oracle
