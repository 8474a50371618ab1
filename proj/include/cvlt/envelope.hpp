#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "cvlt/bytes.hpp"
#include "cvlt/cmac.hpp"
#include "cvlt/drbg.hpp"
#include "cvlt/modes.hpp"
#include "cvlt/rsa.hpp"

namespace cvlt::keyring {
class Keyring;
}

// The sealed-object container:
//
//   offset  size  field
//   0       4     magic "CVLT"
//   4       1     version (0x01)
//   5       1     suite (0x01: AES-256-CBC + AES-CMAC-128)
//   6       8     fingerprint of the wrapping RSA key
//   14      2     wrapped_len, big-endian (RSA modulus bytes)
//   16      16    CBC IV
//   32      8     ct_len, big-endian
//   40      W     RSA-wrapped CEK (32 bytes) || MK (16 bytes)
//   40+W    C     AES-256-CBC ciphertext of the PKCS#7-padded plaintext
//   40+W+C  16    CMAC under MK over every preceding byte
namespace cvlt::envelope {

inline constexpr std::array<std::uint8_t, 4> kMagic{0x43, 0x56, 0x4c, 0x54};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint8_t kSuiteAes256CbcCmac = 0x01;
inline constexpr std::size_t kHeaderSize = 40;
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kCekBytes = 32;
inline constexpr std::size_t kMacKeyBytes = 16;
inline constexpr std::size_t kMinModulusBytes = kCekBytes + kMacKeyBytes + rsa::kWrapOverhead;

using Fingerprint = std::array<std::uint8_t, 8>;

struct EnvelopeHeader {
    std::array<std::uint8_t, 4> magic = kMagic;
    std::uint8_t version = kVersion;
    std::uint8_t suite = kSuiteAes256CbcCmac;
    Fingerprint key_fingerprint{};
    std::uint16_t wrapped_len = 0;
    modes::Iv iv;
    std::uint64_t ct_len = 0;

    Bytes serialize() const;
};

// Byte views into a parsed blob; valid only while the blob is alive.
struct SealedView {
    EnvelopeHeader header;
    ByteView authenticated;  // header || wrapped_keys || ciphertext
    ByteView wrapped_keys;
    ByteView ciphertext;
    ByteView tag;
};

// Structural parse only. Throws Errc::format on a short blob, wrong
// magic/version/suite, inconsistent lengths, or ct_len not a positive multiple
// of 16.
SealedView parse(ByteView blob);

// CMAC under the all-zero 128-bit key over n || 0x00 || e (minimal big-endian
// encodings), first 8 bytes.
Fingerprint fingerprint(const rsa::RsaPublicKey& pub);

// Throws Errc::capacity when the modulus is shorter than 59 bytes.
Bytes seal(ByteView plaintext, const rsa::RsaPublicKey& pub, rng::Drbg& rng);

using KeyResolver = std::function<std::optional<rsa::RsaPrivateKey>(const Fingerprint&)>;

// Parses, resolves the private key by fingerprint, unwraps the content and
// MAC keys, checks the tag over the whole object, and only then decrypts.
// Errc::format for structural problems, Errc::key_not_found when no key
// matches, and Errc::integrity for every unwrap/tag/padding failure alike.
Bytes open(ByteView blob, const KeyResolver& resolve);
Bytes open(ByteView blob, const keyring::Keyring& kr);

// Same checks as open() up to and including the tag, without decrypting the
// payload. Returns false where open() would raise Errc::integrity or
// Errc::format; an unknown fingerprint still throws Errc::key_not_found.
bool verify_only(ByteView blob, const KeyResolver& resolve);
bool verify_only(ByteView blob, const keyring::Keyring& kr);

}  // namespace cvlt::envelope
