#include "spg/patterns.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>

namespace spg {

std::string_view shape_name(Shape s)
{
    switch (s) {
    case Shape::Plain: return "plain";
    case Shape::Diagonal: return "diagonal";
    case Shape::Triangle: return "triangle";
    case Shape::Line: return "line";
    }
    return "?";
}

Shape parse_shape(std::string_view name)
{
    for (Shape s : all_shapes)
        if (shape_name(s) == name)
            return s;
    throw InvalidInput("unknown shape '" + std::string(name) + "'");
}

std::size_t AbstractPattern::slot_size(int slot) const
{
    return static_cast<std::size_t>(std::count(slots.begin(), slots.end(), slot));
}

namespace {

AbstractPattern make_pattern(std::string name, Shape shape, int config, int side, auto figure)
{
    AbstractPattern p{std::move(name), shape, config, shape == Shape::Plain ? 1 : 2, side, {}};
    p.slots.resize(static_cast<std::size_t>(side) * side, 0);
    if (shape != Shape::Plain)
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c)
                p.slots[static_cast<std::size_t>(r) * side + c] = figure(r, c) ? 1 : 0;
    return p;
}

void validate(const AbstractPattern& p, int side)
{
    if (p.side != side)
        throw InvalidInput("pattern '" + p.name + "' has side " + std::to_string(p.side) +
                           ", catalogue side is " + std::to_string(side));
    if (p.slots.size() != static_cast<std::size_t>(side) * side)
        throw InvalidInput("pattern '" + p.name + "' has a malformed slot mask");
    if (p.arity < 1)
        throw InvalidInput("pattern '" + p.name + "' has no color slots");
    for (int s = 0; s < p.arity; ++s)
        if (p.slot_size(s) == 0)
            throw InvalidInput("pattern '" + p.name + "' never uses slot " + std::to_string(s));
    for (auto s : p.slots)
        if (s >= p.arity)
            throw InvalidInput("pattern '" + p.name + "' uses a slot beyond its arity");
    if (p.shape == Shape::Plain && p.arity != 1)
        throw InvalidInput("plain pattern '" + p.name + "' must have arity 1");
}

} // namespace

std::vector<AbstractPattern> enumerate_patterns(int side, std::span<const Shape> shapes)
{
    if (side < 2)
        throw InvalidInput("patterns need a side of at least 2");
    if (shapes.empty())
        throw InvalidInput("empty shape set");

    const int last = side - 1;
    std::vector<AbstractPattern> out;
    auto wanted = [&](Shape s) { return std::find(shapes.begin(), shapes.end(), s) != shapes.end(); };

    if (wanted(Shape::Plain))
        out.push_back(make_pattern("plain", Shape::Plain, 0, side, [](int, int) { return false; }));
    if (wanted(Shape::Diagonal)) {
        out.push_back(make_pattern("diagonal-main", Shape::Diagonal, 0, side,
                                   [](int r, int c) { return r == c; }));
        out.push_back(make_pattern("diagonal-anti", Shape::Diagonal, 1, side,
                                   [last](int r, int c) { return r + c == last; }));
    }
    if (wanted(Shape::Triangle)) {
        // Figure cells lie strictly on one side of a diagonal.
        out.push_back(make_pattern("triangle-upper-right", Shape::Triangle, 0, side,
                                   [](int r, int c) { return c > r; }));
        out.push_back(make_pattern("triangle-lower-left", Shape::Triangle, 1, side,
                                   [](int r, int c) { return r > c; }));
        out.push_back(make_pattern("triangle-upper-left", Shape::Triangle, 2, side,
                                   [last](int r, int c) { return r + c < last; }));
        out.push_back(make_pattern("triangle-lower-right", Shape::Triangle, 3, side,
                                   [last](int r, int c) { return r + c > last; }));
    }
    if (wanted(Shape::Line)) {
        for (int i = 0; i < side; ++i)
            out.push_back(make_pattern("line-v" + std::to_string(i + 1), Shape::Line, i, side,
                                       [i](int, int c) { return c == i; }));
        for (int i = 0; i < side; ++i)
            out.push_back(make_pattern("line-h" + std::to_string(i + 1), Shape::Line, side + i,
                                       side, [i](int r, int) { return r == i; }));
    }
    return out;
}

Grid render(const AbstractPattern& p, std::span<const Color> colors, int num_colors)
{
    if (colors.size() != static_cast<std::size_t>(p.arity))
        throw InvalidInput("pattern '" + p.name + "' needs " + std::to_string(p.arity) +
                           " colors, got " + std::to_string(colors.size()));
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (colors[i] >= num_colors)
            throw InvalidInput("instantiation color out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (colors[i] == colors[j])
                throw InvalidInput("instantiation is not injective");
    }
    std::vector<Color> cells(p.slots.size());
    std::transform(p.slots.begin(), p.slots.end(), cells.begin(),
                   [&](std::uint8_t s) { return colors[s]; });
    return Grid(p.side, num_colors, std::move(cells));
}

PatternMatch pattern_distance(const Grid& s, const AbstractPattern& p)
{
    const int k = s.colors();
    if (s.side() != p.side)
        throw InvalidInput("pattern '" + p.name + "' does not fit a " + std::to_string(s.side()) +
                           "x" + std::to_string(s.side()) + " grid");
    if (k < p.arity)
        throw InvalidInput("pattern '" + p.name + "' needs " + std::to_string(p.arity) +
                           " colors, grid has " + std::to_string(k));

    // cost[slot][color]: mismatches if the slot takes that color.
    std::vector<int> cost(static_cast<std::size_t>(p.arity) * k, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int slot = p.slots[i];
        for (int c = 0; c < k; ++c)
            cost[static_cast<std::size_t>(slot) * k + c] += s[i] != c;
    }

    PatternMatch best{std::numeric_limits<int>::max(), {}};
    std::vector<Color> tuple(p.arity);
    std::vector<bool> used(k, false);
    // Lexicographic enumeration; only a strictly better total replaces the
    // incumbent, so ties keep the smallest tuple.
    auto search = [&](auto&& self, int slot, int acc) -> void {
        if (acc >= best.distance)
            return;
        if (slot == p.arity) {
            best.distance = acc;
            best.colors = tuple;
            return;
        }
        for (int c = 0; c < k; ++c) {
            if (used[c])
                continue;
            used[c] = true;
            tuple[slot] = static_cast<Color>(c);
            self(self, slot + 1, acc + cost[static_cast<std::size_t>(slot) * k + c]);
            used[c] = false;
        }
    };
    search(search, 0, 0);
    return best;
}

int ceil_log2(unsigned long long x)
{
    if (x == 0)
        throw InvalidInput("ceil_log2 of zero");
    return x == 1 ? 0 : static_cast<int>(std::bit_width(x - 1));
}

int describe_complexity(Shape shape, int arity, int num_colors, int nshape, int nconfig)
{
    if (num_colors < arity)
        throw InvalidInput("K=" + std::to_string(num_colors) + " is smaller than pattern arity " +
                           std::to_string(arity));
    unsigned long long colorings = 1;
    for (int i = 0; i < arity; ++i)
        colorings *= static_cast<unsigned long long>(num_colors - i);
    int bits = ceil_log2(colorings);
    if (shape != Shape::Plain)
        bits += ceil_log2(static_cast<unsigned long long>(std::max(nshape, 1))) +
                ceil_log2(static_cast<unsigned long long>(std::max(nconfig, 1)));
    return bits;
}

int describe_complexity(const Catalogue& cat, const AbstractPattern& p, int num_colors)
{
    return describe_complexity(p.shape, p.arity, num_colors, cat.shape_count(),
                               cat.config_count(p.shape));
}

Catalogue::Catalogue(int side, std::vector<AbstractPattern> patterns)
    : side_(side), patterns_(std::move(patterns))
{
    if (patterns_.empty())
        throw InvalidInput("catalogue has no patterns");
    for (const auto& p : patterns_) {
        validate(p, side_);
        if (std::count_if(patterns_.begin(), patterns_.end(),
                          [&](const AbstractPattern& q) { return q.name == p.name; }) > 1)
            throw InvalidInput("duplicate pattern name '" + p.name + "'");
    }
    for (Shape s : all_shapes)
        if (s != Shape::Plain && config_count(s) > 0)
            ++shape_count_;
}

Catalogue Catalogue::standard(int side) { return standard(side, all_shapes); }

Catalogue Catalogue::standard(int side, std::span<const Shape> shapes)
{
    return Catalogue(side, enumerate_patterns(side, shapes));
}

int Catalogue::config_count(Shape s) const
{
    return static_cast<int>(std::count_if(patterns_.begin(), patterns_.end(),
                                          [s](const AbstractPattern& p) { return p.shape == s; }));
}

std::optional<std::size_t> Catalogue::find(std::string_view name) const
{
    for (std::size_t i = 0; i < patterns_.size(); ++i)
        if (patterns_[i].name == name)
            return i;
    return std::nullopt;
}

BasicState Catalogue::instantiate(std::size_t pattern, std::vector<Color> colors,
                                  int num_colors) const
{
    const auto& p = patterns_.at(pattern);
    Grid g = render(p, colors, num_colors);
    return BasicState{pattern, std::move(colors), std::move(g),
                      describe_complexity(*this, p, num_colors)};
}

BasicState Catalogue::closest(std::size_t pattern, const Grid& s) const
{
    auto m = pattern_distance(s, patterns_.at(pattern));
    return instantiate(pattern, std::move(m.colors), s.colors());
}

std::optional<BasicState> Catalogue::exact_match(const Grid& s) const
{
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        auto m = pattern_distance(s, patterns_[i]);
        if (m.distance == 0)
            return instantiate(i, std::move(m.colors), s.colors());
    }
    return std::nullopt;
}

std::string Catalogue::state_id(const BasicState& b) const
{
    std::string id = patterns_.at(b.pattern).name + "/";
    for (std::size_t i = 0; i < b.colors.size(); ++i) {
        if (i)
            id += ',';
        id += std::to_string(int(b.colors[i]));
    }
    return id;
}

BasicState Catalogue::parse_state_id(std::string_view id, int num_colors) const
{
    const auto slash = id.find('/');
    if (slash == std::string_view::npos)
        throw InvalidInput("malformed basic-state id '" + std::string(id) + "'");
    auto idx = find(id.substr(0, slash));
    if (!idx)
        throw InvalidInput("unknown pattern in id '" + std::string(id) + "'");
    std::vector<Color> colors;
    std::string_view rest = id.substr(slash + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        auto tok = rest.substr(0, comma);
        int v = -1;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0 || v > 255)
            throw InvalidInput("malformed color in id '" + std::string(id) + "'");
        colors.push_back(static_cast<Color>(v));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return instantiate(*idx, std::move(colors), num_colors);
}

// Text format:
//   side <n>
//   pattern <name> shape=<shape> config=<id> q=<arity>
//   <n lines of n slot digits>
//   ...
// '#' starts a comment line.
std::string Catalogue::to_text() const
{
    std::ostringstream out;
    out << "# spg pattern catalogue\n";
    out << "side " << side_ << "\n";
    for (const auto& p : patterns_) {
        out << "pattern " << p.name << " shape=" << shape_name(p.shape) << " config=" << p.config
            << " q=" << p.arity << "\n";
        for (int r = 0; r < side_; ++r) {
            for (int c = 0; c < side_; ++c)
                out << char('0' + p.slots[static_cast<std::size_t>(r) * side_ + c]);
            out << "\n";
        }
    }
    return out.str();
}

Catalogue Catalogue::parse(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    int side = 0;
    std::vector<AbstractPattern> patterns;
    auto fail = [&](const std::string& what) {
        throw InvalidInput("catalogue line " + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream words(line);
        std::string head;
        words >> head;
        if (head == "side") {
            if (!(words >> side) || side < 2)
                fail("bad side");
        } else if (head == "pattern") {
            if (side == 0)
                fail("pattern before side");
            AbstractPattern p;
            p.side = side;
            if (!(words >> p.name))
                fail("missing pattern name");
            std::string kv;
            std::map<std::string, std::string> fields;
            while (words >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    fail("expected key=value, got '" + kv + "'");
                fields[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            try {
                p.shape = parse_shape(fields.at("shape"));
                p.config = std::stoi(fields.at("config"));
                p.arity = std::stoi(fields.at("q"));
            } catch (const InvalidInput& e) {
                fail(e.what());
            } catch (const std::exception&) {
                fail("pattern needs shape=, config= and q=");
            }
            for (int r = 0; r < side; ++r) {
                if (!std::getline(in, line))
                    fail("truncated mask for '" + p.name + "'");
                ++lineno;
                if (static_cast<int>(line.size()) != side)
                    fail("mask row has wrong width");
                for (char ch : line) {
                    if (ch < '0' || ch > '9')
                        fail("mask digit expected");
                    p.slots.push_back(static_cast<std::uint8_t>(ch - '0'));
                }
            }
            patterns.push_back(std::move(p));
        } else {
            fail("unknown directive '" + head + "'");
        }
    }
    if (side == 0)
        throw InvalidInput("catalogue has no side directive");
    return Catalogue(side, std::move(patterns));
}

} // namespace spg
