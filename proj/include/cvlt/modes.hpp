#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cvlt/aes.hpp"
#include "cvlt/bytes.hpp"

namespace cvlt::modes {

enum class CipherMode { ecb, cbc, ctr };

class Iv {
public:
    Iv() = default;
    explicit Iv(const aes::Block& bytes) noexcept : bytes_(bytes) {}

    // Throws Errc::invalid_argument unless bytes is exactly 16 bytes long.
    static Iv from(ByteView bytes);

    const aes::Block& bytes() const noexcept { return bytes_; }

    friend bool operator==(const Iv&, const Iv&) = default;

private:
    aes::Block bytes_{};
};

// Appends n copies of the byte n, 1 <= n <= 16.
Bytes pad_pkcs7(ByteView msg);
// Throws Errc::padding if the length is not a positive multiple of 16 or any
// padding byte is wrong.
Bytes unpad_pkcs7(ByteView padded);

// ECB and CBC pad internally; CTR is length preserving. CBC and CTR need an
// IV, ECB rejects one. A CTR counter block starts at the IV and increments as
// a 128-bit big-endian integer.
Bytes mode_encrypt(ByteView msg, const aes::KeySchedule& ks, CipherMode mode, const std::optional<Iv>& iv = {});
Bytes mode_decrypt(ByteView ct, const aes::KeySchedule& ks, CipherMode mode, const std::optional<Iv>& iv = {});

Bytes mode_encrypt(ByteView msg, ByteView key, CipherMode mode, const std::optional<Iv>& iv = {});
Bytes mode_decrypt(ByteView ct, ByteView key, CipherMode mode, const std::optional<Iv>& iv = {});

// Adds one to a 128-bit big-endian counter, wrapping at 2^128.
void increment_be128(aes::Block& counter) noexcept;

}  // namespace cvlt::modes
