#include "cvlt/csp/wire.hpp"

#include "cvlt/error.hpp"

namespace cvlt::csp {

void validate_object_name(std::string_view name) {
    if (name.empty() || name.size() > kMaxObjectNameBytes)
        throw Error(Errc::validation, "object name must be 1-1024 bytes");
    for (char c : name)
        if (c == '\0' || c == '\n') throw Error(Errc::validation, "object name contains a NUL or newline byte");
}

namespace {

Bytes with_prefix(Bytes body) {
    if (body.size() > kMaxRemainder) throw Error(Errc::invalid_argument, "frame exceeds 64 MiB");
    Bytes out;
    out.reserve(kLengthPrefixBytes + body.size());
    put_be32(out, static_cast<std::uint32_t>(body.size()));
    append(out, body);
    return out;
}

}  // namespace

Bytes encode_request(const Request& req) {
    if (req.name.size() > 0xffff) throw Error(Errc::invalid_argument, "object name too long");
    if (kRequestFixedBytes + req.name.size() + req.payload.size() > kMaxRemainder)
        throw Error(Errc::invalid_argument, "frame exceeds 64 MiB");
    Bytes body;
    body.reserve(kRequestFixedBytes + req.name.size() + req.payload.size());
    body.push_back(static_cast<std::uint8_t>(req.op));
    put_be16(body, static_cast<std::uint16_t>(req.name.size()));
    append(body, as_bytes(req.name));
    put_be64(body, req.payload.size());
    append(body, req.payload);
    return with_prefix(std::move(body));
}

Bytes encode_response(const Response& resp) {
    if (kResponseFixedBytes + resp.payload.size() > kMaxRemainder)
        throw Error(Errc::invalid_argument, "frame exceeds 64 MiB");
    Bytes body;
    body.reserve(kResponseFixedBytes + resp.payload.size());
    body.push_back(static_cast<std::uint8_t>(resp.status));
    put_be64(body, resp.payload.size());
    append(body, resp.payload);
    return with_prefix(std::move(body));
}

Request decode_request_body(ByteView body) {
    if (body.size() < kRequestFixedBytes) throw Error(Errc::format, "request frame too short");
    const std::uint8_t op = body[0];
    if (op < 0x01 || op > 0x04) throw Error(Errc::format, "unknown opcode");
    const std::size_t name_len = get_be16(body.data() + 1);
    if (body.size() < kRequestFixedBytes + name_len) throw Error(Errc::format, "name overruns the frame");
    const std::uint64_t payload_len = get_be64(body.data() + 3 + name_len);
    if (payload_len != body.size() - kRequestFixedBytes - name_len)
        throw Error(Errc::format, "payload length does not match the frame length");

    Request req;
    req.op = static_cast<Opcode>(op);
    req.name.assign(reinterpret_cast<const char*>(body.data() + 3), name_len);
    req.payload.assign(body.begin() + static_cast<std::ptrdiff_t>(kRequestFixedBytes + name_len), body.end());

    if (req.op == Opcode::list) {
        if (!req.name.empty() || !req.payload.empty()) throw Error(Errc::format, "LIST takes no name or payload");
        return req;
    }
    try {
        validate_object_name(req.name);
    } catch (const Error& e) {
        throw Error(Errc::format, e.what());
    }
    if (req.op != Opcode::put && !req.payload.empty())
        throw Error(Errc::format, "GET and DELETE take no payload");
    return req;
}

Response decode_response_body(ByteView body) {
    if (body.size() < kResponseFixedBytes) throw Error(Errc::format, "response frame too short");
    const std::uint8_t status = body[0];
    if (status > 0x03) throw Error(Errc::format, "unknown status");
    const std::uint64_t payload_len = get_be64(body.data() + 1);
    if (payload_len != body.size() - kResponseFixedBytes)
        throw Error(Errc::format, "payload length does not match the frame length");
    return {static_cast<Status>(status), Bytes(body.begin() + kResponseFixedBytes, body.end())};
}

}  // namespace cvlt::csp
