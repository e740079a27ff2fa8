#include "spg/live/protocol.hpp"

#include "json.hpp"

namespace spg::live {

using ojson = nlohmann::ordered_json;

std::string_view role_name(Role r) { return r == Role::Player ? "player" : "observer"; }

namespace {

struct Encoder {
    ojson operator()(const Hello& m) const
    {
        return {{"kind", "hello"}, {"session", m.session}, {"role", role_name(m.role)}};
    }
    ojson operator()(const Assign& m) const { return {{"kind", "assign"}, {"cell", m.cell}}; }
    ojson operator()(const Act& m) const { return {{"kind", "act"}, {"color", m.color}}; }
    ojson operator()(const State& m) const
    {
        return {{"kind", "state"}, {"step", m.step}, {"cells", m.cells}, {"reset", m.reset}};
    }
    ojson operator()(const Guess& m) const { return {{"kind", "guess"}, {"cell", m.cell}}; }
    ojson operator()(const GuessResult& m) const
    {
        return {{"kind", "guess_result"}, {"correct", m.correct}};
    }
    ojson operator()(const Error& m) const
    {
        return {{"kind", "error"}, {"code", m.code}, {"text", m.text}};
    }
};

} // namespace

std::string encode(const Message& m) { return std::visit(Encoder{}, m).dump(); }

std::string_view kind_of(const Message& m)
{
    static constexpr std::string_view kinds[] = {"hello", "assign", "act", "state",
                                                 "guess", "guess_result", "error"};
    return kinds[m.index()];
}

Message decode(std::string_view frame)
{
    ojson j;
    try {
        j = ojson::parse(frame);
    } catch (const ojson::parse_error& e) {
        throw ProtocolError(std::string("frame is not JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ProtocolError("frame is not an object");
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "hello") {
            const auto role = j.at("role").get<std::string>();
            if (role != "player" && role != "observer")
                throw ProtocolError("unknown role '" + role + "'");
            return Hello{j.at("session").get<std::string>(),
                         role == "player" ? Role::Player : Role::Observer};
        }
        if (kind == "assign")
            return Assign{j.at("cell").get<int>()};
        if (kind == "act")
            return Act{j.at("color").get<int>()};
        if (kind == "state")
            return State{j.at("step").get<long>(), j.at("cells").get<std::vector<int>>(),
                         j.at("reset").get<bool>()};
        if (kind == "guess")
            return Guess{j.at("cell").get<int>()};
        if (kind == "guess_result")
            return GuessResult{j.at("correct").get<bool>()};
        if (kind == "error")
            return Error{j.at("code").get<std::string>(), j.at("text").get<std::string>()};
        throw ProtocolError("unknown kind '" + kind + "'");
    } catch (const ojson::exception& e) {
        throw ProtocolError(std::string("malformed message: ") + e.what());
    }
}

} // namespace spg::live
