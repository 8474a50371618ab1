#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cvlt/csp/net.hpp"
#include "cvlt/csp/wire.hpp"

namespace cvlt::csp {

// Synchronous client; every call opens its own connection. Connection
// problems throw Errc::network, NOT_FOUND throws Errc::not_found and other
// non-OK statuses throw Errc::remote. Names are validated before sending.
class Client {
public:
    explicit Client(Endpoint server) : server_(std::move(server)) {}

    void put(std::string_view name, ByteView data);
    Bytes get(std::string_view name);
    std::vector<std::string> list();
    void remove(std::string_view name);

    // One raw exchange, no status mapping.
    Response exchange(const Request& req);

private:
    Endpoint server_;
};

// Reads one response frame. Throws Errc::network on a short read and
// Errc::format on a malformed frame.
Response read_response(Socket& sock);

}  // namespace cvlt::csp
