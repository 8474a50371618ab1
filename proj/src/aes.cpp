#include "cvlt/aes.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "cvlt/error.hpp"
#include "cvlt/gf256.hpp"

namespace cvlt::aes {

using gf256::gf_mul;
using gf256::xtime;

namespace {

// Products by the InvMixColumns coefficients, tabulated from gf_mul.
struct InvMixTables {
    std::array<std::uint8_t, 256> x9{}, xb{}, xd{}, xe{};
};

const InvMixTables& inv_mix_tables() {
    static const InvMixTables t = [] {
        InvMixTables r;
        for (unsigned v = 0; v < 256; ++v) {
            auto b = static_cast<std::uint8_t>(v);
            r.x9[v] = gf_mul(b, 0x09);
            r.xb[v] = gf_mul(b, 0x0b);
            r.xd[v] = gf_mul(b, 0x0d);
            r.xe[v] = gf_mul(b, 0x0e);
        }
        return r;
    }();
    return t;
}

using Word = std::array<std::uint8_t, 4>;

Word rot_word(const Word& w) noexcept { return {w[1], w[2], w[3], w[0]}; }

Word sub_word(const Word& w) noexcept {
    const auto& s = gf256::sbox().forward;
    return {s[w[0]], s[w[1]], s[w[2]], s[w[3]]};
}

}  // namespace

KeySize key_size_for_length(std::size_t length) {
    switch (length) {
        case 16: return KeySize::aes128;
        case 24: return KeySize::aes192;
        case 32: return KeySize::aes256;
        default:
            throw Error(Errc::invalid_argument,
                        "AES key must be 16, 24 or 32 bytes, got " + std::to_string(length));
    }
}

AesState bytes_to_state(ByteView block) {
    if (block.size() != kBlockSize)
        throw Error(Errc::invalid_argument, "AES block must be 16 bytes, got " + std::to_string(block.size()));
    AesState s;
    for (int i = 0; i < 16; ++i) s.cells[i % 4][i / 4] = block[i];
    return s;
}

Block state_to_bytes(const AesState& s) noexcept {
    Block out;
    for (int i = 0; i < 16; ++i) out[i] = s.cells[i % 4][i / 4];
    return out;
}

AesState sub_bytes(AesState s) noexcept {
    const auto& box = gf256::sbox().forward;
    for (auto& row : s.cells)
        for (auto& cell : row) cell = box[cell];
    return s;
}

AesState inv_sub_bytes(AesState s) noexcept {
    const auto& box = gf256::sbox().inverse;
    for (auto& row : s.cells)
        for (auto& cell : row) cell = box[cell];
    return s;
}

// Row r rotates left by r.
AesState shift_rows(const AesState& s) noexcept {
    AesState out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out.cells[r][c] = s.cells[r][(c + r) % 4];
    return out;
}

AesState inv_shift_rows(const AesState& s) noexcept {
    AesState out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out.cells[r][(c + r) % 4] = s.cells[r][c];
    return out;
}

// Circulant (02 03 01 01).
Column mix_column(const Column& a) noexcept {
    Column out;
    for (int r = 0; r < 4; ++r) {
        auto a0 = a[r], a1 = a[(r + 1) % 4], a2 = a[(r + 2) % 4], a3 = a[(r + 3) % 4];
        out[r] = static_cast<std::uint8_t>(xtime(a0) ^ (xtime(a1) ^ a1) ^ a2 ^ a3);
    }
    return out;
}

// Circulant (0e 0b 0d 09).
Column inv_mix_column(const Column& a) noexcept {
    const auto& t = inv_mix_tables();
    Column out;
    for (int r = 0; r < 4; ++r) {
        auto a0 = a[r], a1 = a[(r + 1) % 4], a2 = a[(r + 2) % 4], a3 = a[(r + 3) % 4];
        out[r] = static_cast<std::uint8_t>(t.xe[a0] ^ t.xb[a1] ^ t.xd[a2] ^ t.x9[a3]);
    }
    return out;
}

namespace {

template <typename ColumnFn>
AesState map_columns(const AesState& s, ColumnFn fn) noexcept {
    AesState out;
    for (int c = 0; c < 4; ++c) {
        Column col{s.cells[0][c], s.cells[1][c], s.cells[2][c], s.cells[3][c]};
        auto mixed = fn(col);
        for (int r = 0; r < 4; ++r) out.cells[r][c] = mixed[r];
    }
    return out;
}

}  // namespace

AesState mix_columns(const AesState& s) noexcept { return map_columns(s, mix_column); }

AesState inv_mix_columns(const AesState& s) noexcept { return map_columns(s, inv_mix_column); }

AesState add_round_key(AesState s, const RoundKey& rk) noexcept {
    for (int i = 0; i < 16; ++i) s.cells[i % 4][i / 4] ^= rk[i];
    return s;
}

const std::array<std::uint8_t, 11>& round_constants() noexcept {
    static const std::array<std::uint8_t, 11> rcon = [] {
        std::array<std::uint8_t, 11> r{};
        std::uint8_t v = 0x01;
        for (int i = 1; i <= 10; ++i) {
            r[i] = v;
            v = xtime(v);
        }
        return r;
    }();
    return rcon;
}

KeySchedule::KeySchedule(KeySize size, std::vector<RoundKey> round_keys)
    : size_(size), round_keys_(std::move(round_keys)) {
    if (round_keys_.size() != static_cast<std::size_t>(num_rounds(size_) + 1))
        throw Error(Errc::invalid_argument, "key schedule has the wrong number of round keys");
}

KeySchedule expand_key(ByteView key, KeySize size) {
    if (key.size() != key_bytes(size))
        throw Error(Errc::invalid_argument, "AES key length " + std::to_string(key.size()) +
                                                " does not match the requested key size");
    const int nk = static_cast<int>(key.size() / 4);
    const int total_words = 4 * (num_rounds(size) + 1);
    const auto& rcon = round_constants();

    std::vector<Word> w(total_words);
    for (int i = 0; i < nk; ++i) w[i] = {key[4 * i], key[4 * i + 1], key[4 * i + 2], key[4 * i + 3]};
    for (int i = nk; i < total_words; ++i) {
        Word temp = w[i - 1];
        if (i % nk == 0) {
            temp = sub_word(rot_word(temp));
            temp[0] ^= rcon[i / nk];
        } else if (nk > 6 && i % nk == 4) {
            temp = sub_word(temp);
        }
        for (int b = 0; b < 4; ++b) w[i][b] = w[i - nk][b] ^ temp[b];
    }

    std::vector<RoundKey> round_keys(total_words / 4);
    for (int i = 0; i < total_words; ++i)
        for (int b = 0; b < 4; ++b) round_keys[i / 4][4 * (i % 4) + b] = w[i][b];
    return KeySchedule(size, std::move(round_keys));
}

KeySchedule expand_key(ByteView key) { return expand_key(key, key_size_for_length(key.size())); }

Block encrypt_block(const Block& in, const KeySchedule& ks) noexcept {
    const int nr = ks.rounds();
    auto s = add_round_key(bytes_to_state(in), ks[0]);
    for (int round = 1; round < nr; ++round)
        s = add_round_key(mix_columns(shift_rows(sub_bytes(s))), ks[round]);
    s = add_round_key(shift_rows(sub_bytes(s)), ks[nr]);
    return state_to_bytes(s);
}

Block decrypt_block(const Block& in, const KeySchedule& ks) noexcept {
    const int nr = ks.rounds();
    auto s = add_round_key(bytes_to_state(in), ks[nr]);
    s = inv_sub_bytes(inv_shift_rows(s));
    for (int round = nr - 1; round >= 1; --round)
        s = inv_sub_bytes(inv_shift_rows(inv_mix_columns(add_round_key(s, ks[round]))));
    s = add_round_key(s, ks[0]);
    return state_to_bytes(s);
}

namespace {

Block to_block(ByteView in) {
    if (in.size() != kBlockSize)
        throw Error(Errc::invalid_argument, "AES block must be 16 bytes, got " + std::to_string(in.size()));
    Block b;
    std::copy(in.begin(), in.end(), b.begin());
    return b;
}

}  // namespace

Block encrypt_block(ByteView in, const KeySchedule& ks) { return encrypt_block(to_block(in), ks); }

Block decrypt_block(ByteView in, const KeySchedule& ks) { return decrypt_block(to_block(in), ks); }

}  // namespace cvlt::aes
