#include "spg/engine.hpp"

#include <fstream>
#include <sstream>

namespace spg {

void SimConfig::validate() const
{
    if (side < 2)
        throw InvalidInput("side must be at least 2");
    if (colors < 2 || colors > 10)
        throw InvalidInput("colors must be in [2, 10]");
    if (horizon < 0)
        throw InvalidInput("horizon must be non-negative");
    if (!(p_random >= 0.0 && p_random <= 1.0))
        throw InvalidInput("p_random must be a probability");
    if (steps < 0)
        throw InvalidInput("steps must be non-negative");
    if (catalogue.empty())
        throw InvalidInput("catalogue id is empty");
}

std::shared_ptr<const Catalogue> load_catalogue(const SimConfig& cfg)
{
    if (cfg.catalogue == "standard")
        return std::make_shared<const Catalogue>(Catalogue::standard(cfg.side));
    std::ifstream in(cfg.catalogue);
    if (!in)
        throw InvalidInput("cannot open catalogue file '" + cfg.catalogue + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto cat = std::make_shared<const Catalogue>(Catalogue::parse(buf.str()));
    if (cat->side() != cfg.side)
        throw InvalidInput("catalogue side does not match the configured grid side");
    return cat;
}

namespace {

Grid initial_grid(const SimConfig& cfg, Rng& rng)
{
    if (cfg.init == InitMode::White)
        return Grid::filled(cfg.side, cfg.colors, 1);
    std::uniform_int_distribution<int> color(0, cfg.colors - 1);
    std::vector<Color> cells(static_cast<std::size_t>(cfg.side) * cfg.side);
    for (auto& c : cells)
        c = static_cast<Color>(color(rng));
    return Grid(cfg.side, cfg.colors, std::move(cells));
}

} // namespace

World::World(SimConfig cfg)
    : World(cfg, load_catalogue(cfg))
{
}

World::World(SimConfig cfg, std::shared_ptr<const Catalogue> catalogue)
    : cfg_(std::move(cfg)), catalogue_(std::move(catalogue)), rng_(cfg_.seed)
{
    cfg_.validate();
    if (!catalogue_ || catalogue_->side() != cfg_.side)
        throw InvalidInput("catalogue does not match the configured grid side");
    alpha_ = Alpha::for_grid(cfg_.side, cfg_.colors);
    initial_ = initial_grid(cfg_, rng_);
    current_ = initial_;
    reference_ = initial_;
}

void World::exclude(std::optional<int> cell)
{
    if (cell && (*cell < 0 || static_cast<std::size_t>(*cell) >= current_.size()))
        throw InvalidInput("excluded cell outside grid");
    excluded_ = cell;
}

Event World::step()
{
    Event ev;
    ev.step = next_step_++;

    const int cells = static_cast<int>(current_.size());
    std::uniform_int_distribution<int> pick(0, cells - (excluded_ ? 2 : 1));
    ev.cell = pick(rng_);
    if (excluded_ && ev.cell >= *excluded_)
        ++ev.cell;

    auto records = candidates(current_, *catalogue_, cfg_.horizon, alpha_, reference_);
    for (const auto& r : records) {
        if (r.d > 0.0)
            ++ev.desirable_count;
        if (!ev.d_max || r.d > *ev.d_max)
            ev.d_max = r.d;
    }
    const auto chosen = select_target(records, rng_);
    const BasicState* target = chosen ? &records[*chosen].target : nullptr;
    if (target)
        ev.target = catalogue_->state_id(*target);

    ev.action = agent_decide(static_cast<std::size_t>(ev.cell), current_, target, cfg_.p_random,
                             rng_);
    if (ev.action)
        current_ = current_.with(static_cast<std::size_t>(ev.cell), *ev.action);

    ev.reached = maybe_reset_reference();
    ev.reference_reset = ev.reached.has_value();
    return ev;
}

Event World::apply(int cell, Color color)
{
    if (cell < 0 || static_cast<std::size_t>(cell) >= current_.size())
        throw InvalidInput("cell " + std::to_string(cell) + " outside grid");
    if (color >= cfg_.colors)
        throw InvalidInput("color " + std::to_string(int(color)) + " out of range");
    Event ev;
    ev.step = next_step_++;
    ev.cell = cell;
    ev.human = true;
    if (current_[static_cast<std::size_t>(cell)] != color) {
        ev.action = color;
        current_ = current_.with(static_cast<std::size_t>(cell), color);
    }
    ev.reached = maybe_reset_reference();
    ev.reference_reset = ev.reached.has_value();
    return ev;
}

std::optional<std::string> World::maybe_reset_reference()
{
    auto hit = catalogue_->exact_match(current_);
    if (!hit || unexpectedness(reference_, *hit, alpha_) <= 0.0)
        return std::nullopt;
    reference_ = current_;
    return catalogue_->state_id(*hit);
}

RunLog run(const SimConfig& cfg)
{
    World world(cfg);
    RunLog log{world.config(), world.initial(), {}, {}};
    log.events.reserve(static_cast<std::size_t>(cfg.steps));
    for (long i = 0; i < cfg.steps; ++i) {
        log.events.push_back(world.step());
        if (log.events.back().reached)
            log.reached.push_back(*log.events.back().reached);
    }
    return log;
}

} // namespace spg
