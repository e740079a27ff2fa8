#include "spg/live/session.hpp"

#include "spg/runlog.hpp"

#include "json.hpp"

#include <random>

namespace spg::live {

using ojson = nlohmann::ordered_json;

namespace {

int pick_human_cell(const SessionOptions& opts)
{
    const int cells = opts.config.side * opts.config.side;
    if (opts.human_cell) {
        if (*opts.human_cell < 0 || *opts.human_cell >= cells)
            throw InvalidInput("human cell outside grid");
        return *opts.human_cell;
    }
    std::mt19937_64 rng(opts.assign_seed);
    return std::uniform_int_distribution<int>(0, cells - 1)(rng);
}

} // namespace

Session::Session(std::string id, SessionOptions opts)
    : id_(std::move(id)), opts_(std::move(opts)), world_(opts_.config)
{
    if (opts_.tick.count() <= 0)
        throw InvalidInput("tick interval must be positive");
    pick_human_cell(opts_); // validates a fixed cell early
}

State Session::snapshot(bool reset) const
{
    State s;
    s.step = world_.step_count();
    const auto cells = world_.current().cells();
    s.cells.assign(cells.begin(), cells.end());
    s.reset = reset;
    return s;
}

Outbound Session::error_to(ClientId c, std::string code, std::string text)
{
    note(ojson{{"kind", "error"}, {"client", c}, {"code", code}, {"text", text}}.dump());
    return Outbound{c, Error{std::move(code), std::move(text)}};
}

std::vector<Outbound> Session::join(ClientId client, Role role)
{
    if (clients_.contains(client))
        return {error_to(client, "already_joined", "client already in session")};
    if (role == Role::Player && player_)
        return {error_to(client, "occupied", "session already has a human player")};

    std::vector<Outbound> out;
    clients_[client] = role;
    if (role == Role::Player) {
        player_ = client;
        human_cell_ = pick_human_cell(opts_);
        world_.exclude(human_cell_);
        out.push_back({client, Assign{*human_cell_}});
    }
    note(ojson{{"kind", "join"}, {"client", client}, {"role", role_name(role)}}.dump());
    out.push_back({client, snapshot()});
    return out;
}

std::vector<Outbound> Session::leave(ClientId client)
{
    if (!clients_.erase(client))
        return {};
    if (player_ == client) {
        player_.reset();
        human_cell_.reset();
        world_.exclude(std::nullopt);
    }
    note(ojson{{"kind", "leave"}, {"client", client}}.dump());
    return {};
}

std::vector<Outbound> Session::handle(ClientId client, const Message& m)
{
    if (!clients_.contains(client))
        return {error_to(client, "not_joined", "send hello first")};
    if (const auto* act = std::get_if<Act>(&m))
        return on_act(client, *act);
    if (const auto* guess = std::get_if<Guess>(&m))
        return on_guess(client, *guess);
    return {error_to(client, "unexpected", "clients may only send act or guess after hello")};
}

std::vector<Outbound> Session::on_act(ClientId client, const Act& act)
{
    if (player_ != client || !human_cell_)
        return {error_to(client, "not_owner", "only the player may act, on its own cell")};
    if (act.color < 0 || act.color >= opts_.config.colors)
        return {error_to(client, "bad_color",
                         "color must be in [0, " + std::to_string(opts_.config.colors) + ")")};
    auto ev = world_.apply(*human_cell_, static_cast<Color>(act.color));
    note(serialize_event(ev));
    const bool reset = ev.reference_reset;
    events_.push_back(std::move(ev));
    return {{std::nullopt, snapshot(reset)}};
}

std::vector<Outbound> Session::on_guess(ClientId client, const Guess& g)
{
    if (clients_.at(client) != Role::Observer)
        return {error_to(client, "not_observer", "only observers may guess")};
    if (!human_cell_)
        return {error_to(client, "no_human", "no human player in this session")};
    const int cells = opts_.config.side * opts_.config.side;
    if (g.cell < 0 || g.cell >= cells)
        return {error_to(client, "bad_cell", "guess outside grid")};
    const bool correct = g.cell == *human_cell_;
    guesses_.push_back({client, g.cell, correct});
    note(ojson{{"kind", "guess"}, {"client", client}, {"cell", g.cell}, {"correct", correct}}
             .dump());
    return {{client, GuessResult{correct}}};
}

std::vector<Outbound> Session::tick()
{
    auto ev = world_.step();
    note(serialize_event(ev));
    const bool reset = ev.reference_reset;
    events_.push_back(std::move(ev));
    return {{std::nullopt, snapshot(reset)}};
}

} // namespace spg::live
