#include "doctest.h"

#include "spg/live/session.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace spg;
using namespace spg::live;

namespace {

SessionOptions opts(std::uint64_t seed = 1)
{
    SessionOptions o;
    o.config.seed = seed;
    o.config.steps = 0;
    return o;
}

template <class T>
const T& only(const std::vector<Outbound>& out, std::size_t i = 0)
{
    REQUIRE(out.size() > i);
    const T* m = std::get_if<T>(&out[i].message);
    REQUIRE(m);
    return *m;
}

std::string error_code(const std::vector<Outbound>& out)
{
    REQUIRE(out.size() == 1);
    const auto* e = std::get_if<Error>(&out[0].message);
    REQUIRE(e);
    return e->code;
}

} // namespace

TEST_CASE("join replies")
{
    Session s("a", opts());
    auto out = s.join(1, Role::Player);
    REQUIRE(out.size() == 2);
    CHECK(out[0].to == std::optional<ClientId>(1));
    const int cell = only<Assign>(out).cell;
    CHECK(cell >= 0);
    CHECK(cell < 25);
    CHECK(s.human_cell() == std::optional<int>(cell));
    CHECK(s.world().excluded() == std::optional<int>(cell));
    CHECK(only<State>(out, 1).cells.size() == 25);

    out = s.join(2, Role::Observer);
    REQUIRE(out.size() == 1);
    CHECK(only<State>(out).step == 0);

    CHECK(error_code(s.join(3, Role::Player)) == "occupied");
    CHECK(error_code(s.join(2, Role::Observer)) == "already_joined");
    CHECK(s.client_count() == 2);
}

TEST_CASE("ticks broadcast the stepped state")
{
    Session s("a", opts());
    s.join(1, Role::Observer);
    for (int i = 1; i <= 50; ++i) {
        const auto out = s.tick();
        REQUIRE(out.size() == 1);
        CHECK_FALSE(out[0].to);
        const auto& st = only<State>(out);
        CHECK(st.step == i);
        CHECK(st.reset == s.events().back().reference_reset);
        const auto cells = s.world().current().cells();
        CHECK(st.cells == std::vector<int>(cells.begin(), cells.end()));
    }
}

TEST_CASE("acts")
{
    auto o = opts();
    o.human_cell = 6;
    o.config.init = InitMode::White;
    Session s("a", o);
    s.join(1, Role::Player);
    s.join(2, Role::Observer);

    CHECK(error_code(s.handle(2, Act{0})) == "not_owner");
    CHECK(error_code(s.handle(1, Act{2})) == "bad_color");
    CHECK(error_code(s.handle(1, Act{-1})) == "bad_color");
    CHECK(error_code(s.handle(9, Act{0})) == "not_joined");
    CHECK(error_code(s.handle(1, Hello{"a", Role::Player})) == "unexpected");
    CHECK(s.world().step_count() == 0);

    auto out = s.handle(1, Act{1}); // same color: acknowledged, no change
    CHECK_FALSE(out[0].to);
    CHECK(only<State>(out).step == 1);
    CHECK(s.world().current() == Grid::filled(5, 2, 1));

    out = s.handle(1, Act{0});
    CHECK(only<State>(out).cells[6] == 0);
    CHECK(s.events().back().human);
}

TEST_CASE("a human completing a pattern triggers a reset broadcast")
{
    // A one-cell "dot" pattern at the human's cell: from all-white, the
    // player's own act is the missing cell.
    const auto path = std::filesystem::temp_directory_path() / "spg_dot_catalogue.txt";
    {
        std::ofstream f(path);
        f << "side 5\npattern plain shape=plain config=0 q=1\n"
          << "00000\n00000\n00000\n00000\n00000\n"
          << "pattern dot shape=line config=0 q=2\n"
          << "00000\n00000\n00000\n00000\n00001\n";
    }
    auto o = opts();
    o.human_cell = 24;
    o.config.init = InitMode::White;
    o.config.catalogue = path.string();
    Session s("a", o);
    s.join(1, Role::Player);
    const auto out = s.handle(1, Act{0});
    CHECK(only<State>(out).reset);
    CHECK(s.events().back().reached == std::optional<std::string>("dot/1,0"));
    std::filesystem::remove(path);
}

TEST_CASE("player leaving frees the cell")
{
    Session s("a", opts());
    s.join(1, Role::Player);
    CHECK(s.world().excluded());
    s.leave(1);
    CHECK_FALSE(s.world().excluded());
    CHECK_FALSE(s.human_cell());
    CHECK(s.join(2, Role::Player).size() == 2);
    CHECK(s.leave(99).empty());
}

TEST_CASE("guesses")
{
    auto o = opts();
    o.human_cell = 13;
    Session s("a", o);
    s.join(5, Role::Observer);
    CHECK(error_code(s.handle(5, Guess{13})) == "no_human");
    s.join(1, Role::Player);
    CHECK(error_code(s.handle(1, Guess{13})) == "not_observer");
    CHECK(error_code(s.handle(5, Guess{25})) == "bad_cell");

    auto out = s.handle(5, Guess{13});
    CHECK(out[0].to == std::optional<ClientId>(5));
    CHECK(only<GuessResult>(out).correct);
    CHECK_FALSE(only<GuessResult>(s.handle(5, Guess{12})).correct);
    REQUIRE(s.guesses().size() == 2);
    CHECK(s.guesses()[0].correct);
    CHECK(s.transcript().back().find("\"kind\":\"guess\"") != std::string::npos);
}

TEST_CASE("random guessing hits about one cell in 25")
{
    std::mt19937_64 rng(2);
    int hits = 0;
    const int trials = 500;
    for (int i = 0; i < trials; ++i) {
        auto o = opts(static_cast<std::uint64_t>(i));
        o.assign_seed = rng();
        Session s("g", o);
        s.join(1, Role::Player);
        s.join(2, Role::Observer);
        const int g = std::uniform_int_distribution<int>(0, 24)(rng);
        hits += only<GuessResult>(s.handle(2, Guess{g})).correct;
    }
    const double p = 1.0 / 25, se = std::sqrt(p * (1 - p) / trials);
    MESSAGE("random guess rate " << hits / double(trials));
    CHECK(std::abs(hits / double(trials) - p) <= 3 * se);
}

TEST_CASE("without a player the session replays the offline run")
{
    auto o = opts(31);
    Session s("a", o);
    s.join(2, Role::Observer);
    for (int i = 0; i < 2000; ++i)
        s.tick();
    SimConfig c = o.config;
    c.steps = 2000;
    CHECK(s.events() == run(c).events);
}

TEST_CASE("invalid session options")
{
    auto o = opts();
    o.human_cell = 25;
    CHECK_THROWS_AS(Session("a", o), InvalidInput);
    o = opts();
    o.tick = std::chrono::milliseconds(0);
    CHECK_THROWS_AS(Session("a", o), InvalidInput);
}
