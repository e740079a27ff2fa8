#pragma once

#include "spg/engine.hpp"
#include "spg/live/protocol.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spg::live {

using ClientId = std::uint64_t;

struct SessionOptions {
    SimConfig config;
    std::chrono::milliseconds tick{200};
    std::chrono::milliseconds idle_timeout{std::chrono::minutes(10)};
    /// Cell handed to the human player; drawn from `assign_seed` when unset.
    std::optional<int> human_cell;
    std::uint64_t assign_seed = 0x5eed;
};

struct Outbound {
    std::optional<ClientId> to; // nullopt: every connected client
    Message message;
};

struct GuessRecord {
    ClientId observer = 0;
    int cell = 0;
    bool correct = false;
};

/// The state of one live game, independent of any transport. Every mutation
/// goes through join/leave/handle/tick, which return the messages to send.
/// Not thread-safe: the owner serializes all calls.
class Session {
public:
    Session(std::string id, SessionOptions opts);

    const std::string& id() const noexcept { return id_; }
    const SessionOptions& options() const noexcept { return opts_; }

    /// Players receive assign{cell} then the current state; observers only
    /// the state. A second player is refused.
    std::vector<Outbound> join(ClientId client, Role role);
    std::vector<Outbound> leave(ClientId client);
    /// act and guess; anything else is answered with an error.
    std::vector<Outbound> handle(ClientId client, const Message& m);
    /// One agent step, then a state broadcast.
    std::vector<Outbound> tick();

    State snapshot(bool reset = false) const;

    const World& world() const noexcept { return world_; }
    const std::vector<Event>& events() const noexcept { return events_; }
    const std::vector<GuessRecord>& guesses() const noexcept { return guesses_; }
    /// One JSON line per event, act rejection, join/leave and guess.
    const std::vector<std::string>& transcript() const noexcept { return transcript_; }

    std::optional<int> human_cell() const noexcept { return human_cell_; }
    std::optional<ClientId> player() const noexcept { return player_; }
    std::size_t client_count() const noexcept { return clients_.size(); }
    bool has_client(ClientId c) const { return clients_.contains(c); }

private:
    Outbound error_to(ClientId c, std::string code, std::string text);
    std::vector<Outbound> on_act(ClientId client, const Act& act);
    std::vector<Outbound> on_guess(ClientId client, const Guess& g);
    void note(const std::string& line) { transcript_.push_back(line); }

    std::string id_;
    SessionOptions opts_;
    World world_;
    std::map<ClientId, Role> clients_;
    std::optional<ClientId> player_;
    std::optional<int> human_cell_;
    std::vector<Event> events_;
    std::vector<GuessRecord> guesses_;
    std::vector<std::string> transcript_;
};

} // namespace spg::live
