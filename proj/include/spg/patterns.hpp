#pragma once

#include "spg/grid.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spg {

enum class Shape { Plain, Diagonal, Triangle, Line };

inline constexpr std::array<Shape, 4> all_shapes{Shape::Plain, Shape::Diagonal, Shape::Triangle,
                                                 Shape::Line};

std::string_view shape_name(Shape s);
Shape parse_shape(std::string_view name);
/// 0..3 in declaration order; used as the class index in sequence metrics.
inline int shape_index(Shape s) { return static_cast<int>(s); }

/// A shape with uninstantiated color slots. Slot 0 is the background: the
/// slot covering the most cells (ties keep slot 0).
struct AbstractPattern {
    std::string name;
    Shape shape = Shape::Plain;
    int config = 0;
    int arity = 1;
    int side = 0;
    std::vector<std::uint8_t> slots; // per cell, row-major

    std::size_t slot_size(int slot) const;
};

/// Every (shape, configuration) pair of the built-in pattern set, in shape
/// order. For n = 5 and all shapes this is 1 + 2 + 4 + 10 = 17 patterns.
std::vector<AbstractPattern> enumerate_patterns(int side, std::span<const Shape> shapes);

/// Materializes a pattern with an injective slot -> color map.
Grid render(const AbstractPattern& p, std::span<const Color> colors, int num_colors);

struct PatternMatch {
    int distance = 0;
    std::vector<Color> colors; // minimizing instantiation, slot -> color
};

/// Minimum Hamming distance from s to any injective color instantiation of p.
/// Ties resolve to the lexicographically smallest color tuple.
PatternMatch pattern_distance(const Grid& s, const AbstractPattern& p);

/// ceil(log2(x)) for x >= 1.
int ceil_log2(unsigned long long x);

/// A concrete instantiation of a catalogue pattern.
struct BasicState {
    std::size_t pattern = 0; // index into the owning catalogue
    std::vector<Color> colors;
    Grid state;
    int bits = 0; // description complexity

    Color background() const { return colors.front(); }
};

/// An immutable pattern set for one grid side. Shape and configuration
/// counts used by the description coder come from the set itself, so
/// custom catalogues get consistent code lengths.
class Catalogue {
public:
    Catalogue() = default;
    Catalogue(int side, std::vector<AbstractPattern> patterns);

    /// The default monochrome set: plain, diagonals, triangles, lines.
    static Catalogue standard(int side);
    static Catalogue standard(int side, std::span<const Shape> shapes);

    /// Reads the text format produced by to_text().
    static Catalogue parse(std::string_view text);
    std::string to_text() const;

    int side() const noexcept { return side_; }
    std::size_t size() const noexcept { return patterns_.size(); }
    const AbstractPattern& operator[](std::size_t i) const { return patterns_[i]; }
    std::span<const AbstractPattern> patterns() const noexcept { return patterns_; }

    /// Number of distinct non-plain shapes present.
    int shape_count() const noexcept { return shape_count_; }
    int config_count(Shape s) const;

    std::optional<std::size_t> find(std::string_view name) const;

    BasicState instantiate(std::size_t pattern, std::vector<Color> colors, int num_colors) const;
    /// Instantiates the pattern at its distance-minimizing coloring for s.
    BasicState closest(std::size_t pattern, const Grid& s) const;
    /// The basic state equal to s, if any.
    std::optional<BasicState> exact_match(const Grid& s) const;

    /// "name/c0,c1,..." identifier used in logs.
    std::string state_id(const BasicState& b) const;
    BasicState parse_state_id(std::string_view id, int num_colors) const;

private:
    int side_ = 0;
    int shape_count_ = 0;
    std::vector<AbstractPattern> patterns_;
};

/// Description complexity in bits:
/// ceil(log2(K!/(K-q)!)) + ceil(log2(nshape)) + ceil(log2(nconfig)),
/// with the plain shape charged no shape or configuration bits.
int describe_complexity(Shape shape, int arity, int num_colors, int nshape, int nconfig);
int describe_complexity(const Catalogue& cat, const AbstractPattern& p, int num_colors);

} // namespace spg
