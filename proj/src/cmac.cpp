#include "cvlt/cmac.hpp"

namespace cvlt::cmac {

using aes::Block;
using aes::kBlockSize;

Block dbl(const Block& b) noexcept {
    Block out;
    const bool carry = (b[0] & 0x80) != 0;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        const std::uint8_t next = (i + 1 < kBlockSize) ? b[i + 1] : 0;
        out[i] = static_cast<std::uint8_t>((b[i] << 1) | (next >> 7));
    }
    if (carry) out[15] ^= 0x87;
    return out;
}

Subkeys generate_subkeys(const aes::KeySchedule& ks) noexcept {
    const Block l = aes::encrypt_block(Block{}, ks);
    Subkeys sk;
    sk.k1 = dbl(l);
    sk.k2 = dbl(sk.k1);
    return sk;
}

MacTag cmac_tag(ByteView msg, const aes::KeySchedule& ks) {
    const Subkeys sk = generate_subkeys(ks);
    const std::size_t n = msg.size();
    const std::size_t full_before_last = n == 0 ? 0 : (n - 1) / kBlockSize;

    Block x{};
    for (std::size_t blk = 0; blk < full_before_last; ++blk) {
        for (std::size_t i = 0; i < kBlockSize; ++i) x[i] ^= msg[blk * kBlockSize + i];
        x = aes::encrypt_block(x, ks);
    }

    const std::size_t tail_off = full_before_last * kBlockSize;
    const std::size_t tail_len = n - tail_off;
    Block last{};
    if (tail_len == kBlockSize) {
        for (std::size_t i = 0; i < kBlockSize; ++i) last[i] = msg[tail_off + i] ^ sk.k1[i];
    } else {
        for (std::size_t i = 0; i < tail_len; ++i) last[i] = msg[tail_off + i];
        last[tail_len] = 0x80;
        for (std::size_t i = 0; i < kBlockSize; ++i) last[i] ^= sk.k2[i];
    }
    for (std::size_t i = 0; i < kBlockSize; ++i) x[i] ^= last[i];
    return aes::encrypt_block(x, ks);
}

MacTag cmac_tag(ByteView msg, ByteView key) { return cmac_tag(msg, aes::expand_key(key)); }

bool cmac_verify(ByteView msg, const aes::KeySchedule& ks, ByteView tag) {
    const MacTag expected = cmac_tag(msg, ks);
    return equal_ct(expected, tag);
}

bool cmac_verify(ByteView msg, ByteView key, ByteView tag) { return cmac_verify(msg, aes::expand_key(key), tag); }

}  // namespace cvlt::cmac
