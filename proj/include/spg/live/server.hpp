#pragma once

#include "spg/live/session.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace spg::live {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080; // 0 picks a free port
    unsigned threads = 1;
    std::size_t max_sessions = 16;
    /// Template for sessions created by a hello naming an unknown session.
    /// Each gets a seed derived from the template seed and its id.
    SessionOptions defaults;
    bool create_on_hello = true;
};

/// Seed for a session created on demand: FNV-1a of the id mixed into `base`.
std::uint64_t derive_seed(std::uint64_t base, const std::string& session_id);

/// WebSocket host for live sessions. Each session runs its own tick loop on
/// a strand; connections talk to it only by posting messages.
class Server {
public:
    explicit Server(ServerOptions opts);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting on background threads.
    void start();
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();
    void stop();

    unsigned short port() const;

    /// Creates and starts a session. Throws InvalidInput when the id is taken
    /// or the session limit is reached.
    std::string host_session(const std::string& id, SessionOptions opts);

    std::vector<std::string> session_ids() const;

    /// Runs `fn` on the session's loop and waits for it; for inspection.
    /// Returns false if the session does not exist.
    bool inspect(const std::string& id, const std::function<void(const Session&)>& fn);

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

} // namespace spg::live
