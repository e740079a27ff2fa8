#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spg {

using Color = std::uint8_t;

/// Raised for any precondition violation on public operations.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An n x n matrix of color ids in [0, K), stored row-major
/// (cell index = row * n + col). Instances are immutable; use with() to
/// build a successor state.
class Grid {
public:
    Grid() = default;
    Grid(int side, int colors);
    Grid(int side, int colors, std::vector<Color> cells);

    static Grid filled(int side, int colors, Color c);

    /// Parses n lines of n digits ('0'..'9'). Blank lines and surrounding
    /// whitespace are ignored.
    static Grid parse(std::string_view text, int colors);

    int side() const noexcept { return side_; }
    int colors() const noexcept { return colors_; }
    std::size_t size() const noexcept { return cells_.size(); }

    Color operator[](std::size_t cell) const noexcept { return cells_[cell]; }
    Color at(int row, int col) const;
    std::span<const Color> cells() const noexcept { return cells_; }

    Grid with(std::size_t cell, Color c) const;

    /// n lines of n digits, each terminated by '\n'.
    std::string to_text() const;
    /// The n*n digits on a single line.
    std::string to_digits() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int side_ = 0;
    int colors_ = 0;
    std::vector<Color> cells_;
};

void require_same_shape(const Grid& a, const Grid& b);

/// Number of cells at which a and b differ.
int hamming(const Grid& a, const Grid& b);

} // namespace spg
