#pragma once

#include "spg/decision.hpp"
#include "spg/grid.hpp"
#include "spg/patterns.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace spg {

enum class InitMode { Random, White };

struct SimConfig {
    int side = 5;
    int colors = 2;
    int horizon = 7;
    double p_random = 0.5;
    std::uint64_t seed = 1;
    long steps = 10000;
    InitMode init = InitMode::Random;
    /// "standard", or a path to a catalogue file.
    std::string catalogue = "standard";

    void validate() const;
    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Loads the catalogue a config names.
std::shared_ptr<const Catalogue> load_catalogue(const SimConfig& cfg);

struct Event {
    long step = 0;
    int cell = 0;
    std::optional<Color> action;      // new color, if the cell changed
    std::optional<std::string> target; // basic-state id the agent aimed for
    std::optional<double> d_max;      // best desirability among candidates
    int desirable_count = 0;
    bool reference_reset = false;
    std::optional<std::string> reached; // set iff reference_reset
    bool human = false;                 // act injected from outside the agent pool

    friend bool operator==(const Event&, const Event&) = default;
};

/// One simulated game: the grid, the shared reference and the random source.
/// A single logical actor; not safe for concurrent use.
class World {
public:
    explicit World(SimConfig cfg);
    World(SimConfig cfg, std::shared_ptr<const Catalogue> catalogue);

    /// One agent, chosen uniformly among the non-excluded cells, decides and
    /// acts; then the reference-reset rule runs.
    Event step();

    /// Sets `cell` to `color` on behalf of an outside player, then runs the
    /// reference-reset rule.
    Event apply(int cell, Color color);

    /// Resets the reference to the current grid iff it is a basic state with
    /// strictly positive unexpectedness from the outgoing reference. Returns
    /// the reached state's id when it fires.
    std::optional<std::string> maybe_reset_reference();

    /// Removes a cell from the random agent pool (or restores the full pool).
    void exclude(std::optional<int> cell);
    std::optional<int> excluded() const noexcept { return excluded_; }

    const SimConfig& config() const noexcept { return cfg_; }
    const Catalogue& catalogue() const noexcept { return *catalogue_; }
    std::shared_ptr<const Catalogue> catalogue_ptr() const noexcept { return catalogue_; }
    const Grid& current() const noexcept { return current_; }
    const Grid& reference() const noexcept { return reference_; }
    const Grid& initial() const noexcept { return initial_; }
    Alpha alpha() const noexcept { return alpha_; }
    long step_count() const noexcept { return next_step_; }

private:
    SimConfig cfg_;
    std::shared_ptr<const Catalogue> catalogue_;
    Alpha alpha_;
    Rng rng_;
    Grid initial_;
    Grid current_;
    Grid reference_;
    std::optional<int> excluded_;
    long next_step_ = 0;
};

struct RunLog {
    SimConfig config;
    Grid initial;
    std::vector<Event> events;
    std::vector<std::string> reached;

    friend bool operator==(const RunLog&, const RunLog&) = default;
};

RunLog run(const SimConfig& cfg);

} // namespace spg
