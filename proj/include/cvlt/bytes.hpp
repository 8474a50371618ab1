#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvlt {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);

// Accepts upper or lower case; throws Errc::invalid_argument on odd length or
// non-hex characters.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string to_string(ByteView data) {
    return {data.begin(), data.end()};
}

void append(Bytes& out, ByteView data);
void put_be16(Bytes& out, std::uint16_t v);
void put_be32(Bytes& out, std::uint32_t v);
void put_be64(Bytes& out, std::uint64_t v);
std::uint16_t get_be16(const std::uint8_t* p) noexcept;
std::uint32_t get_be32(const std::uint8_t* p) noexcept;
std::uint64_t get_be64(const std::uint8_t* p) noexcept;

// Comparison whose running time does not depend on where the inputs differ.
bool equal_ct(ByteView a, ByteView b) noexcept;

}  // namespace cvlt
