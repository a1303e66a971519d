#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tmc/errors.hpp"

namespace tmc {

struct Coord {
    int row = 0;
    int col = 0;
    auto operator<=>(const Coord&) const = default;
};

inline std::string to_string(Coord p)
{
    return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

struct Dims {
    int rows = 0;
    int cols = 0;
    auto operator<=>(const Dims&) const = default;

    bool contains(Coord p) const { return p.row >= 0 && p.col >= 0 && p.row < rows && p.col < cols; }
    int size() const { return rows * cols; }
    int index(Coord p) const { return p.row * cols + p.col; }
    Coord at(int i) const { return {i / cols, i % cols}; }
};

enum class Dir { up = 0, right = 1, down = 2, left = 3 };

inline constexpr std::array<Dir, 4> kDirs{Dir::up, Dir::right, Dir::down, Dir::left};

inline Coord step(Coord p, Dir d)
{
    switch (d) {
    case Dir::up: return {p.row - 1, p.col};
    case Dir::right: return {p.row, p.col + 1};
    case Dir::down: return {p.row + 1, p.col};
    case Dir::left: return {p.row, p.col - 1};
    }
    return p;
}

inline Dir opposite(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 2) % 4); }
inline Dir turn_cw(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 1) % 4); }
inline bool perpendicular(Dir a, Dir b) { return (static_cast<int>(a) + static_cast<int>(b)) % 2 == 1; }

inline const char* dir_name(Dir d)
{
    static const char* names[] = {"up", "right", "down", "left"};
    return names[static_cast<int>(d)];
}

inline bool parse_dir(std::string_view s, Dir& out)
{
    for (Dir d : kDirs)
        if (s == dir_name(d)) {
            out = d;
            return true;
        }
    return false;
}

// direction from a to an orthogonally adjacent b
inline Dir dir_between(Coord a, Coord b)
{
    if (b.row == a.row - 1 && b.col == a.col) return Dir::up;
    if (b.row == a.row + 1 && b.col == a.col) return Dir::down;
    if (b.col == a.col + 1 && b.row == a.row) return Dir::right;
    if (b.col == a.col - 1 && b.row == a.row) return Dir::left;
    throw ArgumentError("cells " + to_string(a) + " and " + to_string(b) + " are not adjacent");
}

inline bool adjacent(Coord a, Coord b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1; }

inline std::vector<Coord> neighbors(Coord v, Dims dims)
{
    if (!dims.contains(v))
        throw BoundsError(to_string(v) + " outside " + std::to_string(dims.rows) + "x" + std::to_string(dims.cols));
    std::vector<Coord> out;
    for (Dir d : kDirs) {
        Coord n = step(v, d);
        if (dims.contains(n)) out.push_back(n);
    }
    return out;
}

struct Edge {
    Coord a, b;
    Edge() = default;
    Edge(Coord p, Coord q) : a(std::min(p, q)), b(std::max(p, q)) {}
    auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Coord p, Coord q)
{
    if (!adjacent(p, q)) throw ArgumentError("edge " + to_string(p) + "-" + to_string(q) + " joins non-adjacent points");
    return Edge(p, q);
}

inline std::string to_string(const Edge& e) { return to_string(e.a) + "-" + to_string(e.b); }

using EdgeSet = std::set<Edge>;

// all grid edges of a vertex grid in canonical order
inline std::vector<Edge> grid_edges(Dims dims)
{
    std::vector<Edge> out;
    for (int r = 0; r < dims.rows; ++r)
        for (int c = 0; c < dims.cols; ++c) {
            if (c + 1 < dims.cols) out.emplace_back(Coord{r, c}, Coord{r, c + 1});
            if (r + 1 < dims.rows) out.emplace_back(Coord{r, c}, Coord{r + 1, c});
        }
    std::sort(out.begin(), out.end());
    return out;
}

enum class EdgeSetShape { single_cycle, disjoint_cycles, paths_and_cycles, invalid };

inline const char* shape_name(EdgeSetShape s)
{
    switch (s) {
    case EdgeSetShape::single_cycle: return "single-cycle";
    case EdgeSetShape::disjoint_cycles: return "disjoint-cycles";
    case EdgeSetShape::paths_and_cycles: return "paths-and-cycles";
    case EdgeSetShape::invalid: return "invalid";
    }
    return "?";
}

struct EdgeSetClass {
    EdgeSetShape shape = EdgeSetShape::invalid;
    int cycles = 0;          // number of components that are cycles
    std::set<Coord> covered; // vertices touched by at least one edge
};

// Out-of-bounds or non-unit edges and branching vertices (degree > 2) are invalid.
inline EdgeSetClass classify_edge_set(const EdgeSet& edges, Dims dims)
{
    EdgeSetClass res;
    std::map<Coord, std::vector<Coord>> adj;
    for (const Edge& e : edges) {
        if (!dims.contains(e.a) || !dims.contains(e.b) || !adjacent(e.a, e.b)) return res;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    bool any_path = false;
    for (auto& [v, ns] : adj) {
        res.covered.insert(v);
        if (ns.size() > 2) {
            res.covered.clear();
            return res;
        }
        if (ns.size() == 1) any_path = true;
    }
    // count components; a component is a cycle iff all its vertices have degree 2
    std::set<Coord> seen;
    int comps = 0;
    for (auto& [v, ns] : adj) {
        if (seen.count(v)) continue;
        ++comps;
        bool cyc = true;
        std::vector<Coord> st{v};
        seen.insert(v);
        while (!st.empty()) {
            Coord x = st.back();
            st.pop_back();
            if (adj[x].size() != 2) cyc = false;
            for (Coord y : adj[x])
                if (seen.insert(y).second) st.push_back(y);
        }
        if (cyc) ++res.cycles;
    }
    if (any_path || comps == 0)
        res.shape = EdgeSetShape::paths_and_cycles;
    else if (comps == 1)
        res.shape = EdgeSetShape::single_cycle;
    else
        res.shape = EdgeSetShape::disjoint_cycles;
    return res;
}

// Dihedral symmetry: p -> R^k(F^f(p)), R = quarter turn clockwise, F = left-right mirror.
struct D4Transform {
    int rotation = 0; // degrees, one of 0, 90, 180, 270
    bool reflected = false;
    auto operator<=>(const D4Transform&) const = default;

    int quarter_turns() const { return ((rotation / 90) % 4 + 4) % 4; }
};

inline std::string to_string(const D4Transform& t)
{
    return "rot" + std::to_string(t.rotation) + (t.reflected ? "+mirror" : "");
}

inline std::optional<D4Transform> parse_transform(const std::string& s)
{
    for (int r = 0; r < 360; r += 90)
        for (bool f : {false, true}) {
            D4Transform t{r, f};
            if (to_string(t) == s) return t;
        }
    return std::nullopt;
}

inline std::vector<D4Transform> all_transforms()
{
    std::vector<D4Transform> out;
    for (int r = 0; r < 360; r += 90)
        for (bool f : {false, true}) out.push_back({r, f});
    return out;
}

inline D4Transform make_transform(int quarter_turns, bool reflected)
{
    return {((quarter_turns % 4 + 4) % 4) * 90, reflected};
}

// a after b
inline D4Transform compose(const D4Transform& a, const D4Transform& b)
{
    int k = a.quarter_turns() + (a.reflected ? -b.quarter_turns() : b.quarter_turns());
    return make_transform(k, a.reflected != b.reflected);
}

inline D4Transform inverse(const D4Transform& t)
{
    if (t.reflected) return t;
    return make_transform(-t.quarter_turns(), false);
}

inline Dims transformed_dims(const D4Transform& t, Dims d)
{
    return t.quarter_turns() % 2 ? Dims{d.cols, d.rows} : d;
}

inline Coord apply_transform(const D4Transform& t, Coord p, Dims dims)
{
    if (!dims.contains(p)) throw BoundsError(to_string(p) + " outside transform domain");
    if (t.reflected) p.col = dims.cols - 1 - p.col;
    for (int i = 0; i < t.quarter_turns(); ++i) {
        p = {p.col, dims.rows - 1 - p.row};
        dims = {dims.cols, dims.rows};
    }
    return p;
}

inline Dir apply_transform(const D4Transform& t, Dir d)
{
    if (t.reflected && (d == Dir::left || d == Dir::right)) d = opposite(d);
    for (int i = 0; i < t.quarter_turns(); ++i) d = turn_cw(d);
    return d;
}

inline Edge apply_transform(const D4Transform& t, const Edge& e, Dims dims)
{
    return Edge(apply_transform(t, e.a, dims), apply_transform(t, e.b, dims));
}

inline EdgeSet apply_transform(const D4Transform& t, const EdgeSet& es, Dims dims)
{
    EdgeSet out;
    for (const Edge& e : es) out.insert(apply_transform(t, e, dims));
    return out;
}

inline Coord offset(Coord p, Coord o) { return {p.row + o.row, p.col + o.col}; }
inline Edge offset(const Edge& e, Coord o) { return Edge(offset(e.a, o), offset(e.b, o)); }

} // namespace tmc
