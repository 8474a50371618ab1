#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <thread>

#include "cvlt/csp/backend.hpp"
#include "cvlt/csp/net.hpp"
#include "cvlt/csp/wire.hpp"

namespace cvlt::csp {

// Applies one decoded request to the backend. Backend failures become
// SERVER_ERROR.
Response handle_request(Backend& backend, const Request& req);

// Serves the wire protocol with one thread per connection. Frames on a
// connection are handled in order until the peer closes; a malformed frame
// gets BAD_REQUEST and the connection is closed.
class Server {
public:
    // Binds immediately; throws Errc::network if the address is unusable.
    Server(Backend& backend, const Endpoint& addr);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    // Accepts until stop() is called, then closes live connections and joins
    // their threads.
    void run();
    // Safe from any thread, including before run().
    void stop() noexcept;

private:
    struct Connection {
        Socket sock;
        std::thread worker;
        std::atomic<bool> done{false};
    };

    void serve_connection(Connection& conn);
    void reap(bool all);

    Backend& backend_;
    Socket listener_;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex conns_mu_;
    std::list<Connection> conns_;
};

}  // namespace cvlt::csp
