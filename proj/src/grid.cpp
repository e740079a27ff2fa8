#include "spg/grid.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace spg {

namespace {

void check_dims(int side, int colors)
{
    if (side < 1)
        throw InvalidInput("grid side must be positive, got " + std::to_string(side));
    if (colors < 1 || colors > 10)
        throw InvalidInput("color count must be in [1, 10], got " + std::to_string(colors));
}

} // namespace

Grid::Grid(int side, int colors)
    : side_(side), colors_(colors)
{
    check_dims(side, colors);
    cells_.assign(static_cast<std::size_t>(side) * side, 0);
}

Grid::Grid(int side, int colors, std::vector<Color> cells)
    : side_(side), colors_(colors), cells_(std::move(cells))
{
    check_dims(side, colors);
    if (cells_.size() != static_cast<std::size_t>(side) * side)
        throw InvalidInput("grid needs " + std::to_string(side * side) + " cells, got " +
                           std::to_string(cells_.size()));
    for (Color c : cells_)
        if (c >= colors)
            throw InvalidInput("cell color " + std::to_string(int(c)) + " out of range for K=" +
                               std::to_string(colors));
}

Grid Grid::filled(int side, int colors, Color c)
{
    check_dims(side, colors);
    return Grid(side, colors, std::vector<Color>(static_cast<std::size_t>(side) * side, c));
}

Grid Grid::parse(std::string_view text, int colors)
{
    std::vector<std::string> rows;
    std::string row;
    auto flush = [&] {
        if (!row.empty())
            rows.push_back(std::move(row));
        row.clear();
    };
    for (char ch : text) {
        if (ch == '\n') {
            flush();
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            row.push_back(ch);
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw InvalidInput(std::string("unexpected character '") + ch + "' in grid text");
        }
    }
    flush();

    const int side = static_cast<int>(rows.size());
    std::vector<Color> cells;
    cells.reserve(static_cast<std::size_t>(side) * side);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != side)
            throw InvalidInput("grid text is not square");
        for (char ch : r)
            cells.push_back(static_cast<Color>(ch - '0'));
    }
    return Grid(side, colors, std::move(cells));
}

Color Grid::at(int row, int col) const
{
    if (row < 0 || col < 0 || row >= side_ || col >= side_)
        throw InvalidInput("cell (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") outside grid");
    return cells_[static_cast<std::size_t>(row) * side_ + col];
}

Grid Grid::with(std::size_t cell, Color c) const
{
    if (cell >= cells_.size())
        throw InvalidInput("cell index " + std::to_string(cell) + " outside grid");
    if (c >= colors_)
        throw InvalidInput("color " + std::to_string(int(c)) + " out of range");
    Grid next = *this;
    next.cells_[cell] = c;
    return next;
}

std::string Grid::to_text() const
{
    std::string out;
    out.reserve(cells_.size() + side_);
    for (int r = 0; r < side_; ++r) {
        for (int c = 0; c < side_; ++c)
            out.push_back(static_cast<char>('0' + cells_[static_cast<std::size_t>(r) * side_ + c]));
        out.push_back('\n');
    }
    return out;
}

std::string Grid::to_digits() const
{
    std::string out(cells_.size(), '0');
    std::transform(cells_.begin(), cells_.end(), out.begin(),
                   [](Color c) { return static_cast<char>('0' + c); });
    return out;
}

void require_same_shape(const Grid& a, const Grid& b)
{
    if (a.side() != b.side() || a.colors() != b.colors())
        throw InvalidInput("grid mismatch: " + std::to_string(a.side()) + "x" +
                           std::to_string(a.side()) + "/K=" + std::to_string(a.colors()) +
                           " vs " + std::to_string(b.side()) + "x" + std::to_string(b.side()) +
                           "/K=" + std::to_string(b.colors()));
}

int hamming(const Grid& a, const Grid& b)
{
    require_same_shape(a, b);
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

} // namespace spg
