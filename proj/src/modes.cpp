#include "cvlt/modes.hpp"

#include <algorithm>

#include "cvlt/error.hpp"

namespace cvlt::modes {

using aes::Block;
using aes::kBlockSize;

Iv Iv::from(ByteView bytes) {
    if (bytes.size() != kBlockSize) throw Error(Errc::invalid_argument, "IV must be 16 bytes");
    Block b;
    std::copy(bytes.begin(), bytes.end(), b.begin());
    return Iv(b);
}

Bytes pad_pkcs7(ByteView msg) {
    const auto n = static_cast<std::uint8_t>(kBlockSize - msg.size() % kBlockSize);
    Bytes out;
    out.reserve(msg.size() + n);
    out.assign(msg.begin(), msg.end());
    out.insert(out.end(), n, n);
    return out;
}

Bytes unpad_pkcs7(ByteView padded) {
    if (padded.empty() || padded.size() % kBlockSize != 0)
        throw Error(Errc::padding, "padded length is not a positive multiple of 16");
    const std::uint8_t n = padded.back();
    if (n == 0 || n > kBlockSize) throw Error(Errc::padding, "invalid padding");
    std::uint8_t bad = 0;
    for (std::size_t i = padded.size() - n; i < padded.size(); ++i) bad |= padded[i] ^ n;
    if (bad != 0) throw Error(Errc::padding, "invalid padding");
    return Bytes(padded.begin(), padded.end() - n);
}

void increment_be128(Block& counter) noexcept {
    for (int i = 15; i >= 0; --i)
        if (++counter[i] != 0) break;
}

namespace {

const Iv& require_iv(CipherMode mode, const std::optional<Iv>& iv) {
    if (mode == CipherMode::ecb) {
        if (iv) throw Error(Errc::invalid_argument, "ECB does not take an IV");
        static const Iv none;
        return none;
    }
    if (!iv) throw Error(Errc::invalid_argument, "CBC and CTR require a 16-byte IV");
    return *iv;
}

Block load(const std::uint8_t* p) noexcept {
    Block b;
    std::copy_n(p, kBlockSize, b.begin());
    return b;
}

Bytes ctr_xor(ByteView in, const aes::KeySchedule& ks, const Iv& iv) {
    Bytes out(in.begin(), in.end());
    Block counter = iv.bytes();
    for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
        const Block keystream = aes::encrypt_block(counter, ks);
        const std::size_t n = std::min(kBlockSize, out.size() - off);
        for (std::size_t i = 0; i < n; ++i) out[off + i] ^= keystream[i];
        increment_be128(counter);
    }
    return out;
}

}  // namespace

Bytes mode_encrypt(ByteView msg, const aes::KeySchedule& ks, CipherMode mode, const std::optional<Iv>& iv) {
    const Iv& chain_iv = require_iv(mode, iv);
    if (mode == CipherMode::ctr) return ctr_xor(msg, ks, chain_iv);

    Bytes data = pad_pkcs7(msg);
    Block prev = chain_iv.bytes();
    for (std::size_t off = 0; off < data.size(); off += kBlockSize) {
        Block block = load(data.data() + off);
        if (mode == CipherMode::cbc)
            for (std::size_t i = 0; i < kBlockSize; ++i) block[i] ^= prev[i];
        prev = aes::encrypt_block(block, ks);
        std::copy(prev.begin(), prev.end(), data.begin() + static_cast<std::ptrdiff_t>(off));
    }
    return data;
}

Bytes mode_decrypt(ByteView ct, const aes::KeySchedule& ks, CipherMode mode, const std::optional<Iv>& iv) {
    const Iv& chain_iv = require_iv(mode, iv);
    if (mode == CipherMode::ctr) return ctr_xor(ct, ks, chain_iv);

    if (ct.empty() || ct.size() % kBlockSize != 0)
        throw Error(Errc::format, "ciphertext length is not a positive multiple of 16");
    Bytes data(ct.size());
    Block prev = chain_iv.bytes();
    for (std::size_t off = 0; off < ct.size(); off += kBlockSize) {
        const Block in = load(ct.data() + off);
        Block block = aes::decrypt_block(in, ks);
        if (mode == CipherMode::cbc) {
            for (std::size_t i = 0; i < kBlockSize; ++i) block[i] ^= prev[i];
            prev = in;
        }
        std::copy(block.begin(), block.end(), data.begin() + static_cast<std::ptrdiff_t>(off));
    }
    return unpad_pkcs7(data);
}

Bytes mode_encrypt(ByteView msg, ByteView key, CipherMode mode, const std::optional<Iv>& iv) {
    return mode_encrypt(msg, aes::expand_key(key), mode, iv);
}

Bytes mode_decrypt(ByteView ct, ByteView key, CipherMode mode, const std::optional<Iv>& iv) {
    return mode_decrypt(ct, aes::expand_key(key), mode, iv);
}

}  // namespace cvlt::modes
