#include "cvlt/envelope.hpp"

#include <algorithm>
#include <string>

#include "cvlt/error.hpp"
#include "cvlt/keyring.hpp"

namespace cvlt::envelope {

namespace {

constexpr const char* kIntegrityMessage = "integrity check failed: object is corrupt or was not sealed for this key";

struct ContentKeys {
    aes::KeySchedule cek;
    aes::KeySchedule mk;
};

// Resolve, unwrap and authenticate. Every failure past the key lookup is the
// same integrity error.
ContentKeys authenticate(const SealedView& view, const KeyResolver& resolve) {
    const auto priv = resolve(view.header.key_fingerprint);
    if (!priv)
        throw Error(Errc::key_not_found,
                    "no private key with fingerprint " + to_hex(view.header.key_fingerprint) + " in the keyring");
    if (view.wrapped_keys.size() != priv->modulus_bytes()) throw Error(Errc::integrity, kIntegrityMessage);

    Bytes keys;
    try {
        keys = rsa::unwrap_key(view.wrapped_keys, *priv);
    } catch (const Error&) {
        throw Error(Errc::integrity, kIntegrityMessage);
    }
    if (keys.size() != kCekBytes + kMacKeyBytes) throw Error(Errc::integrity, kIntegrityMessage);

    ContentKeys ck{aes::expand_key(ByteView(keys).first(kCekBytes), aes::KeySize::aes256),
                   aes::expand_key(ByteView(keys).subspan(kCekBytes), aes::KeySize::aes128)};
    std::fill(keys.begin(), keys.end(), 0);
    if (!cmac::cmac_verify(view.authenticated, ck.mk, view.tag)) throw Error(Errc::integrity, kIntegrityMessage);
    return ck;
}

KeyResolver keyring_resolver(const keyring::Keyring& kr) {
    return [&kr](const Fingerprint& fp) { return keyring::find_private_by_fingerprint(kr, fp); };
}

}  // namespace

Bytes EnvelopeHeader::serialize() const {
    Bytes out;
    out.reserve(kHeaderSize);
    append(out, magic);
    out.push_back(version);
    out.push_back(suite);
    append(out, key_fingerprint);
    put_be16(out, wrapped_len);
    append(out, iv.bytes());
    put_be64(out, ct_len);
    return out;
}

SealedView parse(ByteView blob) {
    if (blob.size() < kHeaderSize)
        throw Error(Errc::format, "sealed object is truncated (" + std::to_string(blob.size()) + " bytes)");
    SealedView v;
    auto& h = v.header;
    std::copy_n(blob.begin(), 4, h.magic.begin());
    h.version = blob[4];
    h.suite = blob[5];
    std::copy_n(blob.begin() + 6, 8, h.key_fingerprint.begin());
    h.wrapped_len = get_be16(blob.data() + 14);
    h.iv = modes::Iv::from(blob.subspan(16, 16));
    h.ct_len = get_be64(blob.data() + 32);

    if (h.magic != kMagic) throw Error(Errc::format, "not a sealed object (bad magic)");
    if (h.version != kVersion) throw Error(Errc::format, "unsupported envelope version " + std::to_string(h.version));
    if (h.suite != kSuiteAes256CbcCmac) throw Error(Errc::format, "unsupported cipher suite " + std::to_string(h.suite));
    if (h.wrapped_len == 0) throw Error(Errc::format, "empty wrapped-key field");
    if (h.ct_len == 0 || h.ct_len % aes::kBlockSize != 0)
        throw Error(Errc::format, "ciphertext length is not a positive multiple of 16");

    const std::size_t fixed = kHeaderSize + h.wrapped_len + kTagSize;
    if (blob.size() < fixed || blob.size() - fixed != h.ct_len)
        throw Error(Errc::format, "sealed object length does not match its header");

    v.wrapped_keys = blob.subspan(kHeaderSize, h.wrapped_len);
    v.ciphertext = blob.subspan(kHeaderSize + h.wrapped_len, static_cast<std::size_t>(h.ct_len));
    v.authenticated = blob.first(blob.size() - kTagSize);
    v.tag = blob.last(kTagSize);
    return v;
}

Fingerprint fingerprint(const rsa::RsaPublicKey& pub) {
    Bytes input = pub.n.to_bytes_be();
    input.push_back(0x00);
    append(input, pub.e.to_bytes_be());
    static const aes::KeySchedule zero_key = aes::expand_key(Bytes(16, 0), aes::KeySize::aes128);
    const auto tag = cmac::cmac_tag(input, zero_key);
    Fingerprint fp;
    std::copy_n(tag.begin(), fp.size(), fp.begin());
    return fp;
}

Bytes seal(ByteView plaintext, const rsa::RsaPublicKey& pub, rng::Drbg& rng) {
    const std::size_t k = pub.modulus_bytes();
    if (k < kMinModulusBytes)
        throw Error(Errc::capacity, "RSA modulus of " + std::to_string(k) + " bytes cannot wrap the " +
                                        std::to_string(kCekBytes + kMacKeyBytes) + "-byte content keys");
    if (k > 0xffff) throw Error(Errc::capacity, "RSA modulus too large for the envelope header");

    Bytes keys = rng.generate(kCekBytes + kMacKeyBytes);
    const modes::Iv iv = modes::Iv::from(rng.generate(aes::kBlockSize));
    const auto cek = aes::expand_key(ByteView(keys).first(kCekBytes), aes::KeySize::aes256);
    const auto mk = aes::expand_key(ByteView(keys).subspan(kCekBytes), aes::KeySize::aes128);

    const Bytes ciphertext = modes::mode_encrypt(plaintext, cek, modes::CipherMode::cbc, iv);
    const Bytes wrapped = rsa::wrap_key(keys, pub, rng);
    std::fill(keys.begin(), keys.end(), 0);

    EnvelopeHeader h;
    h.key_fingerprint = fingerprint(pub);
    h.wrapped_len = static_cast<std::uint16_t>(wrapped.size());
    h.iv = iv;
    h.ct_len = ciphertext.size();

    Bytes out = h.serialize();
    out.reserve(kHeaderSize + wrapped.size() + ciphertext.size() + kTagSize);
    append(out, wrapped);
    append(out, ciphertext);
    const auto tag = cmac::cmac_tag(out, mk);
    append(out, tag);
    return out;
}

Bytes open(ByteView blob, const KeyResolver& resolve) {
    const SealedView view = parse(blob);
    const ContentKeys keys = authenticate(view, resolve);
    try {
        return modes::mode_decrypt(view.ciphertext, keys.cek, modes::CipherMode::cbc, view.header.iv);
    } catch (const Error&) {
        throw Error(Errc::integrity, kIntegrityMessage);
    }
}

Bytes open(ByteView blob, const keyring::Keyring& kr) { return open(blob, keyring_resolver(kr)); }

bool verify_only(ByteView blob, const KeyResolver& resolve) {
    try {
        authenticate(parse(blob), resolve);
    } catch (const Error& e) {
        if (e.code() == Errc::integrity || e.code() == Errc::format) return false;
        throw;
    }
    return true;
}

bool verify_only(ByteView blob, const keyring::Keyring& kr) { return verify_only(blob, keyring_resolver(kr)); }

}  // namespace cvlt::envelope
