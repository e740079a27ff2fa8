#include "spg/runlog.hpp"

#include "json.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spg {

using ojson = nlohmann::ordered_json;

ParseError::ParseError(std::string source, long line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
{
}

std::string_view init_name(InitMode m) { return m == InitMode::White ? "white" : "random"; }

InitMode parse_init(std::string_view name)
{
    if (name == "white")
        return InitMode::White;
    if (name == "random")
        return InitMode::Random;
    throw InvalidInput("unknown init mode '" + std::string(name) + "'");
}

namespace {

ojson config_json(const SimConfig& c)
{
    return ojson{{"side", c.side},         {"colors", c.colors}, {"horizon", c.horizon},
                 {"p_random", c.p_random}, {"seed", c.seed},     {"steps", c.steps},
                 {"init", init_name(c.init)}, {"catalogue", c.catalogue}};
}

SimConfig config_from(const ojson& j)
{
    SimConfig c;
    c.side = j.at("side").get<int>();
    c.colors = j.at("colors").get<int>();
    c.horizon = j.at("horizon").get<int>();
    c.p_random = j.at("p_random").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.steps = j.at("steps").get<long>();
    c.init = parse_init(j.at("init").get<std::string>());
    c.catalogue = j.at("catalogue").get<std::string>();
    c.validate();
    return c;
}

ojson event_json(const Event& ev)
{
    ojson j{{"kind", "event"}, {"step", ev.step}, {"cell", ev.cell}};
    j["action"] = ev.action ? ojson(int(*ev.action)) : ojson(nullptr);
    j["target"] = ev.target ? ojson(*ev.target) : ojson(nullptr);
    j["d_max"] = ev.d_max ? ojson(*ev.d_max) : ojson(nullptr);
    j["desirable"] = ev.desirable_count;
    j["reset"] = ev.reference_reset;
    if (ev.reached)
        j["reached"] = *ev.reached;
    if (ev.human)
        j["human"] = true;
    return j;
}

Event event_from(const ojson& j)
{
    Event ev;
    ev.step = j.at("step").get<long>();
    ev.cell = j.at("cell").get<int>();
    if (!j.at("action").is_null())
        ev.action = static_cast<Color>(j.at("action").get<int>());
    if (!j.at("target").is_null())
        ev.target = j.at("target").get<std::string>();
    if (!j.at("d_max").is_null())
        ev.d_max = j.at("d_max").get<double>();
    ev.desirable_count = j.at("desirable").get<int>();
    ev.reference_reset = j.at("reset").get<bool>();
    if (auto it = j.find("reached"); it != j.end())
        ev.reached = it->get<std::string>();
    if (auto it = j.find("human"); it != j.end())
        ev.human = it->get<bool>();
    if (ev.reference_reset != ev.reached.has_value())
        throw InvalidInput("reset flag and reached state disagree");
    return ev;
}

} // namespace

std::string serialize_event(const Event& ev) { return event_json(ev).dump(); }

void write_runlog(std::ostream& out, const RunLog& log)
{
    ojson header{{"kind", "header"},
                 {"format", runlog_format},
                 {"config", config_json(log.config)},
                 {"initial", log.initial.to_digits()}};
    out << header.dump() << '\n';
    for (const auto& ev : log.events)
        out << event_json(ev).dump() << '\n';
}

RunLog read_runlog(std::istream& in, const std::string& source)
{
    RunLog log;
    std::string line;
    long lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            const auto j = ojson::parse(line);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "header") {
                if (have_header)
                    throw InvalidInput("second header record");
                if (j.at("format").get<std::string>() != runlog_format)
                    throw InvalidInput("unsupported format '" + j.at("format").get<std::string>() +
                                       "'");
                log.config = config_from(j.at("config"));
                const auto digits = j.at("initial").get<std::string>();
                std::vector<Color> cells;
                for (char ch : digits) {
                    if (ch < '0' || ch > '9')
                        throw InvalidInput("initial grid must be digits");
                    cells.push_back(static_cast<Color>(ch - '0'));
                }
                log.initial = Grid(log.config.side, log.config.colors, std::move(cells));
                have_header = true;
            } else if (kind == "event") {
                if (!have_header)
                    throw InvalidInput("event before header");
                log.events.push_back(event_from(j));
                if (log.events.back().reached)
                    log.reached.push_back(*log.events.back().reached);
            } else {
                throw InvalidInput("unknown record kind '" + kind + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    if (!have_header)
        throw ParseError(source, lineno, "missing header record");
    return log;
}

void save_runlog(const std::string& path, const RunLog& log)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write '" + path + "'");
    write_runlog(out, log);
    if (!out)
        throw InvalidInput("write to '" + path + "' failed");
}

RunLog load_runlog(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open '" + path + "'");
    return read_runlog(in, path);
}

} // namespace spg
