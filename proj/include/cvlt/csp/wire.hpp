#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "cvlt/bytes.hpp"

// Length-prefixed frames, all integers big-endian.
//
//   request:  u32 remainder | u8 opcode | u16 name_len | name | u64 payload_len | payload
//   response: u32 remainder | u8 status | u64 payload_len | payload
//
// `remainder` counts the bytes after itself. A whole frame is at most 64 MiB.
namespace cvlt::csp {

enum class Opcode : std::uint8_t { put = 0x01, get = 0x02, list = 0x03, remove = 0x04 };
enum class Status : std::uint8_t { ok = 0x00, not_found = 0x01, bad_request = 0x02, server_error = 0x03 };

inline constexpr std::size_t kMaxFrameBytes = std::size_t{64} << 20;
inline constexpr std::size_t kLengthPrefixBytes = 4;
inline constexpr std::size_t kMaxRemainder = kMaxFrameBytes - kLengthPrefixBytes;
inline constexpr std::size_t kRequestFixedBytes = 1 + 2 + 8;
inline constexpr std::size_t kResponseFixedBytes = 1 + 8;
inline constexpr std::size_t kMaxObjectNameBytes = 1024;

struct Request {
    Opcode op = Opcode::list;
    std::string name;
    Bytes payload;

    friend bool operator==(const Request&, const Request&) = default;
};

struct Response {
    Status status = Status::ok;
    Bytes payload;

    friend bool operator==(const Response&, const Response&) = default;
};

// 1-1024 bytes, no 0x00 and no 0x0A. Throws Errc::validation.
void validate_object_name(std::string_view name);

// Full frames including the length prefix. Throw Errc::invalid_argument if
// the frame would exceed 64 MiB.
Bytes encode_request(const Request& req);
Bytes encode_response(const Response& resp);

// Decode the part after the length prefix. Throw Errc::format on any
// inconsistency: unknown opcode, lengths that do not add up, an invalid
// object name, or fields an opcode does not allow (LIST takes no name or
// payload; GET and DELETE take no payload).
Request decode_request_body(ByteView body);
Response decode_response_body(ByteView body);

}  // namespace cvlt::csp
