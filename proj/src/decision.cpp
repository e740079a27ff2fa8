#include "spg/decision.hpp"

#include <cmath>

namespace spg {

Alpha Alpha::for_grid(int side, int num_colors)
{
    if (side < 1 || num_colors < 1)
        throw InvalidInput("alpha needs a positive side and color count");
    return Alpha{2.0 * std::log2(static_cast<double>(side)) +
                 std::log2(static_cast<double>(num_colors))};
}

double generation_complexity(const Grid& from, const Grid& to, Alpha alpha)
{
    return alpha.bits * hamming(from, to);
}

double unexpectedness(const Grid& reference, const BasicState& target, Alpha alpha)
{
    return generation_complexity(reference, target.state, alpha) - target.bits;
}

double desirability(const Grid& reference, const Grid& current, const BasicState& target,
                    Alpha alpha)
{
    require_same_shape(reference, current);
    return unexpectedness(reference, target, alpha) -
           generation_complexity(current, target.state, alpha);
}

std::vector<DesirabilityRecord> candidates(const Grid& current, const Catalogue& catalogue,
                                           int horizon, Alpha alpha, const Grid& reference)
{
    require_same_shape(reference, current);
    std::vector<DesirabilityRecord> out;
    for (std::size_t i = 0; i < catalogue.size(); ++i) {
        auto match = pattern_distance(current, catalogue[i]);
        if (match.distance >= horizon)
            continue;
        DesirabilityRecord rec;
        rec.target = catalogue.instantiate(i, std::move(match.colors), current.colors());
        rec.h_cur = match.distance;
        rec.h_ref = hamming(reference, rec.target.state);
        rec.u = alpha.bits * rec.h_ref - rec.target.bits;
        rec.d = rec.u - alpha.bits * rec.h_cur;
        out.push_back(std::move(rec));
    }
    return out;
}

std::optional<std::size_t> select_target(std::span<const DesirabilityRecord> records, Rng& rng)
{
    // Desirabilities are sums of integer multiples of alpha and integer bit
    // counts; values closer than this are the same quantity up to rounding.
    constexpr double tie_eps = 1e-9;
    std::vector<std::size_t> best;
    double best_d = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double d = records[i].d;
        if (d <= 0.0)
            continue;
        if (best.empty() || d > best_d + tie_eps) {
            best.assign(1, i);
            best_d = d;
        } else if (d >= best_d - tie_eps) {
            best.push_back(i);
        }
    }
    if (best.empty())
        return std::nullopt;
    if (best.size() == 1)
        return best.front();
    std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
    return best[pick(rng)];
}

std::optional<Color> agent_decide(std::size_t cell, const Grid& current, const BasicState* target,
                                  double p_random, Rng& rng)
{
    if (cell >= current.size())
        throw InvalidInput("agent cell " + std::to_string(cell) + " outside grid");
    const Color mine = current[cell];
    if (target) {
        const Color want = target->state[cell];
        if (want != mine)
            return want;
        return std::nullopt;
    }
    std::bernoulli_distribution act(p_random);
    if (!act(rng) || current.colors() < 2)
        return std::nullopt;
    if (current.colors() == 2)
        return static_cast<Color>(1 - mine);
    std::uniform_int_distribution<int> other(0, current.colors() - 2);
    int c = other(rng);
    if (c >= mine)
        ++c;
    return static_cast<Color>(c);
}

} // namespace spg
