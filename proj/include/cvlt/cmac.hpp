#pragma once

#include <array>
#include <cstdint>

#include "cvlt/aes.hpp"
#include "cvlt/bytes.hpp"

// AES-CMAC. Used for envelope integrity and key fingerprints.
namespace cvlt::cmac {

using MacTag = aes::Block;

struct Subkeys {
    aes::Block k1{};
    aes::Block k2{};
};

// Doubling in GF(2^128): shift left one bit, XOR 0x87 into the low byte when
// the top bit falls off.
aes::Block dbl(const aes::Block& b) noexcept;

Subkeys generate_subkeys(const aes::KeySchedule& ks) noexcept;

MacTag cmac_tag(ByteView msg, const aes::KeySchedule& ks);
MacTag cmac_tag(ByteView msg, ByteView key);

// Tag comparison does not short-circuit. Returns false for a tag of the wrong
// length.
bool cmac_verify(ByteView msg, const aes::KeySchedule& ks, ByteView tag);
bool cmac_verify(ByteView msg, ByteView key, ByteView tag);

}  // namespace cvlt::cmac
