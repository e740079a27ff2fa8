// spg: run simulated games, sweep horizons, compute metrics from run logs,
// export the pattern catalogue and host live sessions.

#include "spg/engine.hpp"
#include "spg/live/server.hpp"
#include "spg/metrics.hpp"
#include "spg/runlog.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace spg;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_input = 3;

std::string out_dir()
{
    if (const char* d = std::getenv("SPG_OUT_DIR"); d && *d)
        return d;
    return ".";
}

std::string default_path(const std::string& name) { return (fs::path(out_dir()) / name).string(); }

void add_sim_flags(CLI::App& cmd, SimConfig& cfg, std::string& init)
{
    cmd.add_option("-n,--side", cfg.side, "grid side length")->capture_default_str();
    cmd.add_option("-k,--colors", cfg.colors, "number of colors")->capture_default_str();
    cmd.add_option("--horizon", cfg.horizon,
                   "patterns are candidates when fewer than this many cells away")
        ->capture_default_str();
    cmd.add_option("--p-random", cfg.p_random,
                   "probability of a random color change when nothing is desirable")
        ->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    cmd.add_option("--steps", cfg.steps, "agent decisions to simulate")->capture_default_str();
    cmd.add_option("--init", init, "initial grid: random or white")
        ->check(CLI::IsMember({"random", "white"}))
        ->capture_default_str();
    cmd.add_option("--catalogue", cfg.catalogue, "'standard' or a catalogue file")
        ->capture_default_str();
}

/// "3", "1..10" and comma lists, e.g. "1..5,9".
template <class T>
std::vector<T> parse_ranges(const std::vector<std::string>& specs)
{
    std::vector<T> out;
    for (const auto& spec : specs) {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty())
                continue;
            const auto dots = item.find("..");
            try {
                if (dots == std::string::npos) {
                    out.push_back(static_cast<T>(std::stoll(item)));
                } else {
                    const auto lo = std::stoll(item.substr(0, dots));
                    const auto hi = std::stoll(item.substr(dots + 2));
                    if (hi < lo)
                        throw CLI::ValidationError("range '" + item + "' is empty");
                    for (auto v = lo; v <= hi; ++v)
                        out.push_back(static_cast<T>(v));
                }
            } catch (const std::logic_error&) {
                throw CLI::ValidationError("cannot parse '" + item + "' as a number or range");
            }
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write '" + path + "'");
    out << body;
}

int cmd_run(const SimConfig& cfg, const std::string& out_path)
{
    const auto log = run(cfg);
    save_runlog(out_path, log);

    const auto cat = load_catalogue(cfg);
    const auto visits = visited_sequence(log, *cat);
    std::set<std::string> shapes;
    for (const auto& v : visits)
        shapes.insert(std::string(shape_name(v.shape)));
    Grid final_grid = log.initial;
    for (const auto& ev : log.events)
        if (ev.action)
            final_grid = final_grid.with(static_cast<std::size_t>(ev.cell), *ev.action);

    std::cout << "log: " << out_path << "\n";
    std::cout << "steps: " << log.events.size() << "\n";
    std::cout << "resets: " << log.reached.size() << "\n";
    std::cout << "shapes_visited:";
    for (const auto& s : shapes)
        std::cout << ' ' << s;
    std::cout << "\n";
    std::cout << "final_complexity: " << grid_complexity(final_grid, *cat) << "\n";
    std::cout << "desirable_fraction: " << desirable_fraction(log) << "\n";
    return 0;
}

int cmd_sweep(const SimConfig& base, const std::vector<int>& horizons,
              const std::vector<std::uint64_t>& seeds, unsigned threads, const std::string& out_path)
{
    const auto points = desirable_sweep(base, horizons, seeds, threads);
    std::ostringstream csv;
    csv << "horizon,mean,stddev,stderr,seeds,steps\n";
    csv.precision(10);
    for (const auto& p : points)
        csv << p.horizon << ',' << p.mean << ',' << p.stddev << ',' << p.std_err << ',' << p.seeds
            << ',' << base.steps << '\n';
    if (out_path == "-")
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return 0;
}

struct MetricsRequest {
    std::vector<std::string> logs;
    bool trace = false;
    long trace_limit = 0;
    bool desirable = false;
    bool visited = false;
    bool table2 = false;
    bool raw_transitions = false;
    bool periodogram = false;
    int null_trials = 200;
    std::uint64_t null_seed = 7;
    std::string out_dir;
};

int cmd_metrics(const MetricsRequest& req)
{
    std::vector<RunLog> logs;
    for (const auto& path : req.logs)
        logs.push_back(load_runlog(path));
    const fs::path dir = req.out_dir.empty() ? fs::path(out_dir()) : fs::path(req.out_dir);
    fs::create_directories(dir);

    auto stem = [&](std::size_t i) { return fs::path(req.logs[i]).stem().string(); };

    if (req.trace) {
        for (std::size_t i = 0; i < logs.size(); ++i) {
            auto trace = complexity_trace(logs[i]);
            if (req.trace_limit > 0 && trace.size() > static_cast<std::size_t>(req.trace_limit))
                trace.resize(static_cast<std::size_t>(req.trace_limit));
            std::ostringstream csv;
            csv << "step,complexity\n";
            for (const auto& p : trace)
                csv << p.step << ',' << p.value << '\n';
            const auto path = (dir / (stem(i) + ".trace.csv")).string();
            write_file(path, csv.str());
            std::cout << "trace: " << path << " (" << trace.size() << " rows)\n";
        }
    }
    if (req.desirable) {
        std::ostringstream csv;
        csv << "log,horizon,seed,steps,desirable_fraction\n";
        csv.precision(10);
        for (std::size_t i = 0; i < logs.size(); ++i)
            csv << req.logs[i] << ',' << logs[i].config.horizon << ',' << logs[i].config.seed << ','
                << logs[i].events.size() << ',' << desirable_fraction(logs[i]) << '\n';
        const auto path = (dir / "desirable.csv").string();
        write_file(path, csv.str());
        std::cout << "desirable: " << path << "\n";
    }
    if (req.visited) {
        for (std::size_t i = 0; i < logs.size(); ++i) {
            std::ostringstream csv;
            csv << "index,pattern,shape,config,background\n";
            const auto visits = visited_sequence(logs[i]);
            for (std::size_t k = 0; k < visits.size(); ++k)
                csv << k << ',' << visits[k].pattern << ',' << shape_name(visits[k].shape) << ','
                    << visits[k].config << ',' << int(visits[k].background) << '\n';
            const auto path = (dir / (stem(i) + ".visited.csv")).string();
            write_file(path, csv.str());
            std::cout << "visited: " << path << " (" << visits.size() << " rows)\n";
        }
    }
    if (req.table2) {
        TransitionOptions opts;
        opts.merge_repeats = !req.raw_transitions;
        const auto m = transition_matrix(std::span<const RunLog>(logs), opts);
        const auto table = format_transition_table(m);
        write_file((dir / "transitions.tsv").string(), table);
        write_file((dir / "transitions.csv").string(), transition_csv(m));
        std::cout << table;
    }
    if (req.periodogram) {
        for (std::size_t i = 0; i < logs.size(); ++i) {
            const auto series = shape_series(visited_sequence(logs[i]));
            const auto pg = periodogram(std::span<const double>(series));
            const auto band = dominance_null(series, req.null_trials, req.null_seed);
            std::ostringstream csv;
            csv << "frequency,power\n";
            csv.precision(12);
            for (std::size_t k = 0; k < pg.power.size(); ++k)
                csv << pg.frequency[k] << ',' << pg.power[k] << '\n';
            const auto path = (dir / (stem(i) + ".periodogram.csv")).string();
            write_file(path, csv.str());
            std::cout << "periodogram: " << path << "\n"
                      << "  length: " << series.size() << "\n"
                      << "  dominance: " << pg.dominance << " at frequency "
                      << pg.frequency[pg.peak] << "\n"
                      << "  null_95: [" << band.lower << ", " << band.upper << "]\n"
                      << "  regular: " << (band.contains(pg.dominance) ? "no" : "yes") << "\n";
        }
    }
    return 0;
}

int cmd_serve(live::ServerOptions opts, const std::string& session_id)
{
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    live::Server server(opts);
    server.start();
    server.host_session(session_id, opts.defaults);
    std::cerr << "listening on ws://" << opts.address << ":" << server.port() << "/ session '"
              << session_id << "', tick " << opts.defaults.tick.count() << " ms\n";

    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "stopping\n";
    server.stop();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simplified Poietic Generator: simplicity-driven agents on a shared grid"};
    app.require_subcommand(1);

    SimConfig cfg;
    std::string init = "random";
    std::string out_path;

    auto* run_cmd = app.add_subcommand("run", "simulate one game and write its run log");
    add_sim_flags(*run_cmd, cfg, init);
    run_cmd->add_option("-o,--out", out_path, "run log path (default $SPG_OUT_DIR/run.ndjson)");

    auto* sweep_cmd = app.add_subcommand("sweep", "desirable-time fraction as a function of horizon");
    add_sim_flags(*sweep_cmd, cfg, init);
    std::vector<std::string> horizon_specs{"0..25"};
    std::vector<std::string> seed_specs{"1..10"};
    unsigned threads = 0;
    sweep_cmd->add_option("--horizons", horizon_specs, "horizon values, e.g. 0..25")
        ->capture_default_str();
    sweep_cmd->add_option("--seeds", seed_specs, "seeds, e.g. 1..10 or 3,5,8")->capture_default_str();
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    sweep_cmd->add_option("-o,--out", out_path,
                          "CSV path, '-' for stdout (default $SPG_OUT_DIR/sweep.csv)");

    MetricsRequest mreq;
    auto* metrics_cmd = app.add_subcommand("metrics", "derive measurements from run logs");
    metrics_cmd->add_option("logs", mreq.logs, "run log files")->required()->check(CLI::ExistingFile);
    metrics_cmd->add_flag("--trace", mreq.trace, "complexity of the grid after every step");
    metrics_cmd->add_option("--trace-limit", mreq.trace_limit, "keep only the first N trace rows");
    metrics_cmd->add_flag("--desirable", mreq.desirable, "desirable-time fraction per log");
    metrics_cmd->add_flag("--visited", mreq.visited, "reached basic states in order");
    metrics_cmd->add_flag("--table2", mreq.table2, "pooled shape-to-shape transition table");
    metrics_cmd->add_flag("--raw-transitions", mreq.raw_transitions,
                          "count repeated (shape, background) visits as transitions");
    metrics_cmd->add_flag("--periodogram", mreq.periodogram,
                          "spectrum of the visited shape sequence against a shuffle null");
    metrics_cmd->add_option("--null-trials", mreq.null_trials, "shuffles for the null band")
        ->capture_default_str();
    metrics_cmd->add_option("--out-dir", mreq.out_dir, "output directory (default $SPG_OUT_DIR)");

    int cat_side = 5;
    std::string cat_check;
    auto* cat_cmd = app.add_subcommand("catalogue", "export or validate a pattern catalogue");
    cat_cmd->add_option("-n,--side", cat_side, "grid side for the standard catalogue")
        ->capture_default_str();
    cat_cmd->add_option("--check", cat_check, "parse a catalogue file and print its code lengths")
        ->check(CLI::ExistingFile);
    cat_cmd->add_option("-o,--out", out_path, "write the catalogue here instead of stdout");

    live::ServerOptions sopts;
    std::string session_id = "main";
    long tick_ms = 200;
    long idle_s = 600;
    int human_cell = -1;
    auto* serve_cmd = app.add_subcommand("serve", "host live sessions over WebSocket");
    add_sim_flags(*serve_cmd, cfg, init);
    serve_cmd->add_option("--address", sopts.address, "listen address")->capture_default_str();
    serve_cmd->add_option("--port", sopts.port, "listen port")->capture_default_str();
    serve_cmd->add_option("--threads", sopts.threads, "I/O threads")->capture_default_str();
    serve_cmd->add_option("--max-sessions", sopts.max_sessions, "session limit")
        ->capture_default_str();
    serve_cmd->add_option("--session", session_id, "id of the session hosted at startup")
        ->capture_default_str();
    serve_cmd->add_option("--tick-ms", tick_ms, "milliseconds between agent steps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    serve_cmd->add_option("--idle-timeout", idle_s, "seconds an empty session survives")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    serve_cmd->add_option("--human-cell", human_cell, "cell given to the human player (default random)");

    try {
        app.parse(argc, argv);
        cfg.init = parse_init(init);
        cfg.validate();
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    } catch (const InvalidInput& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return exit_usage;
    }

    try {

        if (*run_cmd) {
            if (out_path.empty())
                out_path = default_path("run.ndjson");
            return cmd_run(cfg, out_path);
        }
        if (*sweep_cmd) {
            const auto horizons = parse_ranges<int>(horizon_specs);
            const auto seeds = parse_ranges<std::uint64_t>(seed_specs);
            if (horizons.empty() || seeds.empty()) {
                std::cerr << "sweep: need at least one horizon and one seed\n";
                return exit_usage;
            }
            if (out_path.empty())
                out_path = default_path("sweep.csv");
            return cmd_sweep(cfg, horizons, seeds, threads, out_path);
        }
        if (*metrics_cmd) {
            if (!(mreq.trace || mreq.desirable || mreq.visited || mreq.table2 || mreq.periodogram)) {
                std::cerr << "metrics: choose at least one of --trace --desirable --visited "
                             "--table2 --periodogram\n";
                return exit_usage;
            }
            return cmd_metrics(mreq);
        }
        if (*cat_cmd) {
            if (!cat_check.empty()) {
                std::ifstream in(cat_check);
                std::stringstream buf;
                buf << in.rdbuf();
                const auto cat = Catalogue::parse(buf.str());
                std::cout << "patterns: " << cat.size() << "\n";
                for (const auto& p : cat.patterns())
                    std::cout << p.name << ' ' << shape_name(p.shape) << " q=" << p.arity
                              << " bits(K=2)=" << describe_complexity(cat, p, 2) << "\n";
                return 0;
            }
            const auto text = Catalogue::standard(cat_side).to_text();
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return 0;
        }
        if (*serve_cmd) {
            sopts.defaults.config = cfg;
            sopts.defaults.tick = std::chrono::milliseconds(tick_ms);
            sopts.defaults.idle_timeout = std::chrono::seconds(idle_s);
            if (human_cell >= 0)
                sopts.defaults.human_cell = human_cell;
            return cmd_serve(sopts, session_id);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_input;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
