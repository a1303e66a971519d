#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "tmc/cycle_search.hpp"
#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/report.hpp"

namespace tmc {

struct MetacellSpec {
    std::array<bool, 4> exits{};
    std::optional<Dir> forced;

    bool has(Dir d) const { return exits[static_cast<int>(d)]; }
    int exit_count() const { return exits[0] + exits[1] + exits[2] + exits[3]; }
    // the side without an exit (meaningful when exit_count() == 3)
    Dir missing() const
    {
        for (Dir d : kDirs)
            if (!has(d)) return d;
        return Dir::up;
    }
    bool operator==(const MetacellSpec&) const = default;
};

inline MetacellSpec make_spec(std::initializer_list<Dir> exits, std::optional<Dir> forced = std::nullopt)
{
    MetacellSpec s;
    for (Dir d : exits) s.exits[static_cast<int>(d)] = true;
    s.forced = forced;
    return s;
}

struct MetacellGridInstance {
    int rows = 0, cols = 0;
    std::vector<MetacellSpec> cells;

    Dims dims() const { return {rows, cols}; }
    const MetacellSpec& at(Coord p) const { return cells.at(dims().index(p)); }
    MetacellSpec& at(Coord p) { return cells.at(dims().index(p)); }
    bool all_forced() const
    {
        for (auto& c : cells)
            if (!c.forced) return false;
        return true;
    }
    bool operator==(const MetacellGridInstance&) const = default;
};

struct MetacellCycle {
    EdgeSet edges;
    bool operator==(const MetacellCycle&) const = default;
    auto operator<=>(const MetacellCycle& o) const { return edges <=> o.edges; }
};

// cells p and q (adjacent) can be joined when both have the facing exits
inline bool aligned(const MetacellGridInstance& inst, Coord p, Coord q)
{
    Dir d = dir_between(p, q);
    return inst.at(p).has(d) && inst.at(q).has(opposite(d));
}

inline Report validate_instance(const MetacellGridInstance& inst)
{
    Report rep;
    Dims dims = inst.dims();
    if (inst.rows < 1 || inst.cols < 1 || static_cast<int>(inst.cells.size()) != dims.size()) {
        rep.add("grid must have at least one cell and rows*cols specs");
        return rep;
    }
    for (int i = 0; i < dims.size(); ++i) {
        Coord p = dims.at(i);
        const MetacellSpec& s = inst.at(p);
        std::string at = "cell " + to_string(p);
        if (s.exit_count() != 3) {
            rep.add(at + " has " + std::to_string(s.exit_count()) + " exits, expected 3");
            continue;
        }
        int inward = 0;
        for (Dir d : kDirs) {
            if (!s.has(d)) continue;
            if (dims.contains(step(p, d)))
                ++inward;
            else if (s.forced != d)
                rep.warn(at + " exit " + dir_name(d) + " faces the boundary");
        }
        if (inward == 0) rep.add(at + " has no exit toward a neighbouring cell");
        if (!s.forced) continue;
        Dir f = *s.forced;
        if (!s.has(f)) {
            rep.add(at + " forced exit " + dir_name(f) + " is not one of its exits");
            continue;
        }
        if (!perpendicular(f, s.missing())) rep.add(at + " unforced exits are opposite sides");
        Coord q = step(p, f);
        if (!dims.contains(q))
            rep.add(at + " forced exit " + dir_name(f) + " faces the boundary");
        else if (!inst.at(q).has(opposite(f)))
            rep.add(at + " forced exit " + dir_name(f) + " has no matching exit on " + to_string(q));
    }
    return rep;
}

inline Report validate_cycle(const MetacellGridInstance& inst, const MetacellCycle& cand)
{
    Report rep;
    Dims dims = inst.dims();
    auto cls = classify_edge_set(cand.edges, dims);
    if (cls.shape != EdgeSetShape::single_cycle)
        rep.add(std::string("not a cycle: ") + shape_name(cls.shape));
    else if (static_cast<int>(cls.covered.size()) != dims.size())
        rep.add("cycle covers " + std::to_string(cls.covered.size()) + " of " + std::to_string(dims.size()) + " cells");
    for (const Edge& e : cand.edges) {
        if (!dims.contains(e.a) || !dims.contains(e.b)) {
            rep.add("edge " + to_string(e) + " out of bounds");
            continue;
        }
        if (!aligned(inst, e.a, e.b)) rep.add("edge " + to_string(e) + " joins cells without facing exits");
    }
    for (int i = 0; i < dims.size(); ++i) {
        Coord p = dims.at(i);
        auto f = inst.at(p).forced;
        if (!f) continue;
        Coord q = step(p, *f);
        if (!dims.contains(q) || !cand.edges.count(Edge(p, q)))
            rep.add("forced edge unused at " + to_string(p) + " toward " + dir_name(*f));
    }
    return rep;
}

namespace detail {

// cell graph of aligned adjacencies, forced exits fixed in
inline CycleSearch metacell_search(const MetacellGridInstance& inst, std::vector<Edge>& edges)
{
    Dims dims = inst.dims();
    CycleSearch s(dims.size());
    edges.clear();
    for (const Edge& e : grid_edges(dims)) {
        if (!aligned(inst, e.a, e.b)) continue;
        int id = s.add_edge(dims.index(e.a), dims.index(e.b));
        edges.push_back(e);
        for (Coord p : {e.a, e.b}) {
            Coord q = p == e.a ? e.b : e.a;
            if (inst.at(p).forced && step(p, *inst.at(p).forced) == q) s.fix(id, true);
        }
    }
    return s;
}

} // namespace detail

inline Enumeration<MetacellCycle> enumerate_cycles(const MetacellGridInstance& inst, long long cap,
                                                   std::uint64_t node_budget = 0)
{
    check_cap(cap);
    Enumeration<MetacellCycle> out;
    if (!validate_instance(inst).ok()) return out;
    std::vector<Edge> edges;
    CycleSearch s = detail::metacell_search(inst, edges);
    SearchOptions opts;
    opts.node_budget = node_budget;
    auto st = s.search(
        [&](const std::vector<EdgeState>& state) {
            if (static_cast<long long>(out.solutions.size()) == cap) {
                out.truncated = true;
                return false;
            }
            MetacellCycle c;
            for (int e : CycleSearch::in_edges(state)) c.edges.insert(edges[e]);
            out.solutions.push_back(std::move(c));
            return true;
        },
        opts);
    if (st == SearchStatus::budget_exhausted) throw BudgetError("metacell enumeration exceeded the node budget");
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

inline std::optional<MetacellCycle> solve_cycle(const MetacellGridInstance& inst)
{
    auto e = enumerate_cycles(inst, 1);
    if (e.solutions.empty()) return std::nullopt;
    return e.solutions.front();
}

// Exits avoid the boundary wherever a cell has a choice; corner cells
// cannot, so each keeps exactly one boundary-facing exit.
// About half the cells get a forced exit; with every_cell_forced all of them do
// (exit layouts are redrawn until each cell has a usable forced side).
inline MetacellGridInstance random_instance(std::uint64_t seed, int R, int C, bool every_cell_forced = false)
{
    if (R < 2 || C < 2) throw ArgumentError("random_instance needs at least 2 rows and 2 columns");
    std::mt19937_64 rng(seed);
    auto pick = [&](int k) { return static_cast<int>(rng() % static_cast<std::uint64_t>(k)); };
    MetacellGridInstance inst;
    inst.rows = R;
    inst.cols = C;
    Dims dims = inst.dims();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        inst.cells.assign(R * C, MetacellSpec{});
        for (int i = 0; i < dims.size(); ++i) {
            Coord p = dims.at(i);
            std::vector<Dir> outward;
            for (Dir d : kDirs)
                if (!dims.contains(step(p, d))) outward.push_back(d);
            Dir missing = outward.empty() ? kDirs[pick(4)] : outward[pick(static_cast<int>(outward.size()))];
            for (Dir d : kDirs) inst.cells[i].exits[static_cast<int>(d)] = d != missing;
        }
        bool complete = true;
        for (int i = 0; i < dims.size(); ++i) {
            Coord p = dims.at(i);
            MetacellSpec& s = inst.cells[i];
            bool want = every_cell_forced || pick(2) == 0;
            std::vector<Dir> options;
            for (Dir d : kDirs) {
                if (!s.has(d) || !perpendicular(d, s.missing())) continue;
                Coord q = step(p, d);
                if (dims.contains(q) && inst.at(q).has(opposite(d))) options.push_back(d);
            }
            if (want && !options.empty()) s.forced = options[pick(static_cast<int>(options.size()))];
            if (want && options.empty()) complete = false;
        }
        if (!every_cell_forced || complete) return inst;
    }
    throw InvariantError("no fully forced layout found");
}

// ---- json ----

inline json metacell_json(const MetacellGridInstance& inst)
{
    json cells = json::array();
    for (int r = 0; r < inst.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < inst.cols; ++c) {
            const MetacellSpec& s = inst.at({r, c});
            json ex = json::array();
            for (Dir d : kDirs)
                if (s.has(d)) ex.push_back(dir_name(d));
            row.push_back(json{{"exits", ex}, {"forced", s.forced ? json(dir_name(*s.forced)) : json(nullptr)}});
        }
        cells.push_back(row);
    }
    return json{{"rows", inst.rows}, {"cols", inst.cols}, {"cells", cells}};
}

inline MetacellGridInstance metacell_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    MetacellGridInstance inst;
    inst.rows = int_field(j, "rows", path, 1);
    inst.cols = int_field(j, "cols", path, 1);
    std::string cp = key_path(path, "cells");
    const json& cells = array_at(field(j, "cells", path), cp);
    if (static_cast<int>(cells.size()) != inst.rows) throw InputError(cp + ": expected " + std::to_string(inst.rows) + " rows");
    for (int r = 0; r < inst.rows; ++r) {
        std::string rp = index_path(cp, r);
        const json& row = array_at(cells[r], rp);
        if (static_cast<int>(row.size()) != inst.cols)
            throw InputError(rp + ": expected " + std::to_string(inst.cols) + " cells");
        for (int c = 0; c < inst.cols; ++c) {
            std::string p = index_path(rp, c);
            MetacellSpec s;
            const json& ex = array_at(field(row[c], "exits", p), key_path(p, "exits"));
            for (size_t k = 0; k < ex.size(); ++k) {
                Dir d = as_dir(ex[k], index_path(key_path(p, "exits"), k));
                if (s.has(d)) throw InputError(key_path(p, "exits") + ": duplicate exit");
                s.exits[static_cast<int>(d)] = true;
            }
            auto it = row[c].find("forced");
            if (it != row[c].end() && !it->is_null()) s.forced = as_dir(*it, key_path(p, "forced"));
            inst.cells.push_back(s);
        }
    }
    return inst;
}

inline json cycle_json(const MetacellCycle& c) { return json{{"edges", jsonio::edge_set_json(c.edges)}}; }

inline MetacellCycle cycle_from_json(const json& j, const std::string& path = "$")
{
    return {jsonio::as_edge_set(jsonio::field(j, "edges", path), jsonio::key_path(path, "edges"))};
}

} // namespace tmc
