#pragma once

// Brute-force reference evaluators for tests. Nothing here calls
// pattern_distance, candidates or select_target: distances are counted cell
// by cell over explicitly rendered instantiations and desirabilities are
// compared through their integer parts.

#include "spg/grid.hpp"
#include "spg/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using spg::Color;

inline std::vector<std::vector<Color>> injective_tuples(int arity, int colors)
{
    std::vector<std::vector<Color>> out;
    std::vector<Color> cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == arity) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c < colors; ++c) {
            if (std::find(cur.begin(), cur.end(), Color(c)) != cur.end())
                continue;
            cur.push_back(Color(c));
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out; // lexicographic order
}

inline int count_mismatch(const spg::Grid& s, const spg::AbstractPattern& p,
                          const std::vector<Color>& colors)
{
    int d = 0;
    for (int r = 0; r < s.side(); ++r)
        for (int c = 0; c < s.side(); ++c) {
            const auto i = static_cast<std::size_t>(r * s.side() + c);
            d += s.at(r, c) != colors[p.slots[i]];
        }
    return d;
}

struct Match {
    int distance;
    std::vector<Color> colors;
};

inline Match min_instantiation(const spg::Grid& s, const spg::AbstractPattern& p)
{
    Match best{1 << 30, {}};
    for (const auto& t : injective_tuples(p.arity, s.colors())) {
        const int d = count_mismatch(s, p, t);
        if (d < best.distance)
            best = {d, t};
    }
    return best;
}

inline spg::Grid paint(const spg::AbstractPattern& p, const std::vector<Color>& colors, int k)
{
    std::vector<Color> cells;
    for (auto slot : p.slots)
        cells.push_back(colors[slot]);
    return spg::Grid(p.side, k, cells);
}

inline int raw_hamming(const spg::Grid& a, const spg::Grid& b)
{
    int d = 0;
    for (int r = 0; r < a.side(); ++r)
        for (int c = 0; c < a.side(); ++c)
            d += a.at(r, c) != b.at(r, c);
    return d;
}

/// Description lengths for the monochrome 5x5 set, K = 2, as tabulated.
inline int table_bits(spg::Shape s)
{
    switch (s) {
    case spg::Shape::Plain: return 1;
    case spg::Shape::Diagonal: return 4;
    case spg::Shape::Triangle: return 5;
    case spg::Shape::Line: return 7;
    }
    return -1;
}

struct Candidate {
    std::size_t pattern;
    std::vector<Color> colors;
    int h_ref;
    int h_cur;
    int bits;
    double d(double alpha) const { return alpha * (h_ref - h_cur) - bits; }
    /// Desirabilities tie iff these integer parts agree (alpha is irrational).
    bool same_value(const Candidate& o) const
    {
        return h_ref - h_cur == o.h_ref - o.h_cur && bits == o.bits;
    }
};

/// Every catalogue pattern at its closest instantiation, strictly within
/// `horizon` cells of `cur`. K = 2, 5x5 only (bits come from the table).
inline std::vector<Candidate> evaluate(const spg::Catalogue& cat, const spg::Grid& ref,
                                       const spg::Grid& cur, int horizon)
{
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < cat.size(); ++i) {
        const auto m = min_instantiation(cur, cat[i]);
        if (m.distance >= horizon)
            continue;
        const auto g = paint(cat[i], m.colors, cur.colors());
        out.push_back({i, m.colors, raw_hamming(ref, g), m.distance, table_bits(cat[i].shape)});
    }
    return out;
}

inline spg::Grid random_grid(std::mt19937_64& rng, int side, int k)
{
    std::uniform_int_distribution<int> col(0, k - 1);
    std::vector<Color> cells(static_cast<std::size_t>(side * side));
    for (auto& c : cells)
        c = Color(col(rng));
    return spg::Grid(side, k, cells);
}

} // namespace oracle
