#include "cvlt/csp/server.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <exception>

#include "cvlt/error.hpp"

namespace cvlt::csp {

Response handle_request(Backend& backend, const Request& req) {
    try {
        switch (req.op) {
        case Opcode::put:
            backend.put(req.name, req.payload);
            return {Status::ok, {}};
        case Opcode::get:
            if (auto data = backend.get(req.name)) return {Status::ok, std::move(*data)};
            return {Status::not_found, {}};
        case Opcode::list: {
            Bytes out;
            bool first = true;
            for (const auto& name : backend.list()) {
                if (!first) out.push_back(0x0a);
                append(out, as_bytes(name));
                first = false;
            }
            if (out.size() + kResponseFixedBytes > kMaxRemainder) return {Status::server_error, {}};
            return {Status::ok, std::move(out)};
        }
        case Opcode::remove:
            return {backend.remove(req.name) ? Status::ok : Status::not_found, {}};
        }
    } catch (const std::exception&) {
    }
    return {Status::server_error, {}};
}

Server::Server(Backend& backend, const Endpoint& addr) : backend_(backend), listener_(listen_on(addr)) {
    port_ = local_port(listener_);
}

Server::~Server() {
    stop();
    reap(true);
}

void Server::stop() noexcept {
    stopping_.store(true);
    listener_.shutdown_both();
}

void Server::reap(bool all) {
    std::list<Connection> finished;
    {
        std::lock_guard lock(conns_mu_);
        for (auto it = conns_.begin(); it != conns_.end();) {
            auto next = std::next(it);
            if (all) it->sock.shutdown_both();
            if (all || it->done.load()) finished.splice(finished.end(), conns_, it);
            it = next;
        }
    }
    for (auto& c : finished)
        if (c.worker.joinable()) c.worker.join();
}

void Server::run() {
    while (!stopping_.load()) {
        const int fd = ::accept4(listener_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
        if (fd < 0) {
            if (errno == EINTR || errno == ECONNABORTED) continue;
            if (stopping_.load()) break;
            if (errno == EMFILE || errno == ENFILE || errno == ENOBUFS || errno == ENOMEM) {
                reap(false);
                std::this_thread::sleep_for(std::chrono::milliseconds(10));
                continue;
            }
            break;
        }
        reap(false);
        std::lock_guard lock(conns_mu_);
        if (stopping_.load()) {
            ::close(fd);
            break;
        }
        auto& conn = conns_.emplace_back();
        conn.sock = Socket(fd);
        conn.worker = std::thread([this, &conn] { serve_connection(conn); });
    }
    reap(true);
}

void Server::serve_connection(Connection& conn) {
    Socket& sock = conn.sock;
    try {
        for (;;) {
            std::uint8_t prefix[kLengthPrefixBytes];
            if (sock.read_full(prefix) != sizeof prefix) break;
            const std::uint32_t remainder = get_be32(prefix);
            if (remainder > kMaxRemainder || remainder < kRequestFixedBytes) {
                sock.write_all(encode_response({Status::bad_request, {}}));
                break;
            }
            Bytes body(remainder);
            if (sock.read_full(body) != body.size()) break;
            Request req;
            try {
                req = decode_request_body(body);
            } catch (const Error&) {
                sock.write_all(encode_response({Status::bad_request, {}}));
                break;
            }
            body = {};
            sock.write_all(encode_response(handle_request(backend_, req)));
        }
    } catch (const std::exception&) {
    }
    sock.shutdown_both();
    conn.done.store(true);
}

}  // namespace cvlt::csp
