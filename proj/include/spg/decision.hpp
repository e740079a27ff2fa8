#pragma once

#include "spg/grid.hpp"
#include "spg/patterns.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace spg {

using Rng = std::mt19937_64;

/// Bits needed to write down one changed cell: its position and new color,
/// 2 log2(n) + log2(K). Exact, not rounded.
struct Alpha {
    double bits = 0.0;

    static Alpha for_grid(int side, int num_colors);
    static Alpha for_grid(const Grid& g) { return for_grid(g.side(), g.colors()); }
};

/// Cost of producing `to` from `from` one cell at a time.
double generation_complexity(const Grid& from, const Grid& to, Alpha alpha);

/// alpha * H(reference, target) - C_d(target). Negative when the target is
/// closer to the reference than its own description is long.
double unexpectedness(const Grid& reference, const BasicState& target, Alpha alpha);

/// Unexpectedness of the target minus what it still costs to reach it from
/// the current state.
double desirability(const Grid& reference, const Grid& current, const BasicState& target,
                    Alpha alpha);

struct DesirabilityRecord {
    BasicState target;
    int h_ref = 0;
    int h_cur = 0;
    double u = 0.0;
    double d = 0.0;
};

/// Evaluates every catalogue pattern, instantiated at its closest coloring to
/// `current`, and keeps those within `horizon` cells of it.
std::vector<DesirabilityRecord> candidates(const Grid& current, const Catalogue& catalogue,
                                           int horizon, Alpha alpha, const Grid& reference);

/// Index of a maximally desirable record, or nullopt if none has d > 0.
/// Ties draw uniformly from `rng`; no draw is made without a tie.
std::optional<std::size_t> select_target(std::span<const DesirabilityRecord> records, Rng& rng);

/// The move of the agent at `cell`: step toward the target if its cell
/// differs, otherwise nothing. Without a target, change to a uniformly chosen
/// other color with probability p_random.
std::optional<Color> agent_decide(std::size_t cell, const Grid& current, const BasicState* target,
                                  double p_random, Rng& rng);

} // namespace spg
