#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spg::live {

enum class Role { Player, Observer };

std::string_view role_name(Role r);

struct Hello {
    std::string session;
    Role role = Role::Observer;
    friend bool operator==(const Hello&, const Hello&) = default;
};

struct Assign {
    int cell = 0;
    friend bool operator==(const Assign&, const Assign&) = default;
};

struct Act {
    int color = 0;
    friend bool operator==(const Act&, const Act&) = default;
};

struct State {
    long step = 0;
    std::vector<int> cells;
    bool reset = false;
    friend bool operator==(const State&, const State&) = default;
};

struct Guess {
    int cell = 0;
    friend bool operator==(const Guess&, const Guess&) = default;
};

struct GuessResult {
    bool correct = false;
    friend bool operator==(const GuessResult&, const GuessResult&) = default;
};

struct Error {
    std::string code;
    std::string text;
    friend bool operator==(const Error&, const Error&) = default;
};

using Message = std::variant<Hello, Assign, Act, State, Guess, GuessResult, Error>;

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One JSON object per frame, tagged by "kind":
/// hello, assign, act, state, guess, guess_result, error.
std::string encode(const Message& m);
Message decode(std::string_view frame);

std::string_view kind_of(const Message& m);

} // namespace spg::live
