#include "cvlt/csp/client.hpp"

#include "cvlt/error.hpp"

namespace cvlt::csp {

Response read_response(Socket& sock) {
    std::uint8_t prefix[kLengthPrefixBytes];
    if (sock.read_full(prefix) != sizeof prefix) throw Error(Errc::network, "connection closed before a response");
    const std::uint32_t remainder = get_be32(prefix);
    if (remainder > kMaxRemainder || remainder < kResponseFixedBytes)
        throw Error(Errc::format, "response frame length out of range");
    Bytes body(remainder);
    if (sock.read_full(body) != body.size()) throw Error(Errc::network, "connection closed mid-response");
    return decode_response_body(body);
}

Response Client::exchange(const Request& req) {
    const Bytes frame = encode_request(req);
    Socket sock = connect_to(server_);
    sock.write_all(frame);
    return read_response(sock);
}

namespace {

Response expect_ok(Response resp, std::string_view what) {
    switch (resp.status) {
    case Status::ok:
        return resp;
    case Status::not_found:
        throw Error(Errc::not_found, std::string(what) + ": no such object");
    case Status::bad_request:
        throw Error(Errc::remote, std::string(what) + ": server rejected the request");
    case Status::server_error:
        break;
    }
    throw Error(Errc::remote, std::string(what) + ": server error");
}

}  // namespace

void Client::put(std::string_view name, ByteView data) {
    validate_object_name(name);
    expect_ok(exchange({Opcode::put, std::string(name), Bytes(data.begin(), data.end())}), "put");
}

Bytes Client::get(std::string_view name) {
    validate_object_name(name);
    return expect_ok(exchange({Opcode::get, std::string(name), {}}), "get").payload;
}

std::vector<std::string> Client::list() {
    const Bytes payload = expect_ok(exchange({Opcode::list, {}, {}}), "list").payload;
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start < payload.size()) {
        std::size_t end = start;
        while (end < payload.size() && payload[end] != 0x0a) ++end;
        names.emplace_back(payload.begin() + static_cast<std::ptrdiff_t>(start),
                           payload.begin() + static_cast<std::ptrdiff_t>(end));
        start = end + 1;
    }
    return names;
}

void Client::remove(std::string_view name) {
    validate_object_name(name);
    expect_ok(exchange({Opcode::remove, std::string(name), {}}), "delete");
}

}  // namespace cvlt::csp
