#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cvlt/bytes.hpp"

namespace cvlt::csp {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    // "host:port" or "[v6addr]:port". Throws Errc::invalid_argument.
    static Endpoint parse(std::string_view text);
    std::string to_string() const;
};

// Owning file descriptor for a stream socket.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) noexcept : fd_(fd) {}
    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket();

    int fd() const noexcept { return fd_; }
    bool valid() const noexcept { return fd_ >= 0; }
    void close() noexcept;
    void shutdown_both() noexcept;

    // Throws Errc::network on error.
    void write_all(ByteView data);
    // Returns the number of bytes read; less than data.size() only at EOF.
    std::size_t read_full(std::span<std::uint8_t> data);

private:
    int fd_ = -1;
};

// Throws Errc::network if no address for the endpoint accepts the connection.
Socket connect_to(const Endpoint& ep);

// Bound and listening socket. Port 0 picks an ephemeral port.
Socket listen_on(const Endpoint& ep, int backlog = 64);
std::uint16_t local_port(const Socket& s);

}  // namespace cvlt::csp
