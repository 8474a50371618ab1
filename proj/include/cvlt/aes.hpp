#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvlt/bytes.hpp"

namespace cvlt::aes {

inline constexpr std::size_t kBlockSize = 16;

using Block = std::array<std::uint8_t, kBlockSize>;
using RoundKey = Block;
using Column = std::array<std::uint8_t, 4>;

enum class KeySize { aes128, aes192, aes256 };

constexpr std::size_t key_bytes(KeySize size) noexcept {
    switch (size) {
        case KeySize::aes128: return 16;
        case KeySize::aes192: return 24;
        case KeySize::aes256: return 32;
    }
    return 0;
}

constexpr int num_rounds(KeySize size) noexcept {
    switch (size) {
        case KeySize::aes128: return 10;
        case KeySize::aes192: return 12;
        case KeySize::aes256: return 14;
    }
    return 0;
}

// Throws Errc::invalid_argument unless length is 16, 24 or 32.
KeySize key_size_for_length(std::size_t length);

// 4x4 byte matrix. Block byte i lives at cells[i % 4][i / 4] (column-major).
struct AesState {
    std::array<std::array<std::uint8_t, 4>, 4> cells{};

    std::uint8_t& at(int row, int col) noexcept { return cells[row][col]; }
    std::uint8_t at(int row, int col) const noexcept { return cells[row][col]; }

    friend bool operator==(const AesState&, const AesState&) = default;
};

// Throws Errc::invalid_argument if block is not exactly 16 bytes.
AesState bytes_to_state(ByteView block);
Block state_to_bytes(const AesState& s) noexcept;

AesState sub_bytes(AesState s) noexcept;
AesState inv_sub_bytes(AesState s) noexcept;
AesState shift_rows(const AesState& s) noexcept;
AesState inv_shift_rows(const AesState& s) noexcept;
Column mix_column(const Column& c) noexcept;
Column inv_mix_column(const Column& c) noexcept;
AesState mix_columns(const AesState& s) noexcept;
AesState inv_mix_columns(const AesState& s) noexcept;
AesState add_round_key(AesState s, const RoundKey& rk) noexcept;

// Rcon[i] = x^(i-1) in GF(2^8) for i = 1..10; index 0 is unused and zero.
const std::array<std::uint8_t, 11>& round_constants() noexcept;

class KeySchedule {
public:
    KeySchedule(KeySize size, std::vector<RoundKey> round_keys);

    KeySize key_size() const noexcept { return size_; }
    int rounds() const noexcept { return num_rounds(size_); }
    const std::vector<RoundKey>& round_keys() const noexcept { return round_keys_; }
    const RoundKey& operator[](std::size_t i) const noexcept { return round_keys_[i]; }

private:
    KeySize size_;
    std::vector<RoundKey> round_keys_;
};

// Throws Errc::invalid_argument when key.size() != key_bytes(size).
KeySchedule expand_key(ByteView key, KeySize size);
// Infers the key size from the key length.
KeySchedule expand_key(ByteView key);

Block encrypt_block(const Block& in, const KeySchedule& ks) noexcept;
Block decrypt_block(const Block& in, const KeySchedule& ks) noexcept;

// Span forms; throw Errc::invalid_argument on a block of the wrong length.
Block encrypt_block(ByteView in, const KeySchedule& ks);
Block decrypt_block(ByteView in, const KeySchedule& ks);

}  // namespace cvlt::aes
