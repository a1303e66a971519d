#pragma once

#include <optional>

#include "tmc/cycle_search.hpp"
#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/report.hpp"

namespace tmc {

struct EntryExitInstance {
    int rows = 0, cols = 0;
    std::vector<int> region_of; // row-major

    Dims dims() const { return {rows, cols}; }
    int region(Coord p) const { return region_of.at(dims().index(p)); }
    int num_regions() const
    {
        int m = -1;
        for (int r : region_of) m = std::max(m, r);
        return m + 1;
    }
    bool operator==(const EntryExitInstance&) const = default;
};

struct CellLoop {
    std::vector<Coord> loop;
    bool operator==(const CellLoop&) const = default;
    auto operator<=>(const CellLoop& o) const { return loop <=> o.loop; }
};

inline Report check_regions(const EntryExitInstance& inst)
{
    Report rep;
    Dims dims = inst.dims();
    if (static_cast<int>(inst.region_of.size()) != dims.size() || dims.size() == 0) {
        rep.add("region map has wrong size");
        return rep;
    }
    int k = inst.num_regions();
    std::vector<int> seen_cells(k, 0), comps(k, 0);
    for (int id : inst.region_of) {
        if (id < 0) {
            rep.add("negative region id");
            return rep;
        }
        ++seen_cells[id];
    }
    for (int id = 0; id < k; ++id)
        if (!seen_cells[id]) rep.add("region ids are not dense: " + std::to_string(id) + " unused");
    std::vector<bool> vis(dims.size(), false);
    for (int i = 0; i < dims.size(); ++i) {
        if (vis[i]) continue;
        int id = inst.region_of[i];
        ++comps[id];
        std::vector<int> st{i};
        vis[i] = true;
        while (!st.empty()) {
            Coord p = dims.at(st.back());
            st.pop_back();
            for (Coord q : neighbors(p, dims)) {
                int j = dims.index(q);
                if (!vis[j] && inst.region_of[j] == id) {
                    vis[j] = true;
                    st.push_back(j);
                }
            }
        }
    }
    for (int id = 0; id < k; ++id)
        if (comps[id] > 1) rep.add("region " + std::to_string(id) + " is not connected");
    if (k == 1) rep.warn("a single region spans the whole grid");
    return rep;
}

// canonical cyclic order: start at (0,0), first step toward the smaller neighbour
inline CellLoop canonical_loop(const CellLoop& in)
{
    const auto& v = in.loop;
    if (v.size() < 3) return in;
    auto it = std::min_element(v.begin(), v.end());
    size_t n = v.size(), s = static_cast<size_t>(it - v.begin());
    Coord next = v[(s + 1) % n], prev = v[(s + n - 1) % n];
    CellLoop out;
    out.loop.reserve(n);
    if (next <= prev)
        for (size_t i = 0; i < n; ++i) out.loop.push_back(v[(s + i) % n]);
    else
        for (size_t i = 0; i < n; ++i) out.loop.push_back(v[(s + n - i) % n]);
    return out;
}

inline Report validate(const EntryExitInstance& inst, const CellLoop& sol)
{
    Report rep = check_regions(inst);
    if (!rep.ok()) return rep;
    Dims dims = inst.dims();
    const auto& v = sol.loop;
    std::vector<int> visits(dims.size(), 0);
    bool geometry_ok = true;
    for (Coord p : v) {
        if (!dims.contains(p)) {
            rep.add("cell " + to_string(p) + " out of bounds");
            geometry_ok = false;
            continue;
        }
        ++visits[dims.index(p)];
    }
    for (int i = 0; i < dims.size(); ++i) {
        if (visits[i] == 0) rep.add("cell " + to_string(dims.at(i)) + " not visited");
        if (visits[i] > 1) rep.add("cell " + to_string(dims.at(i)) + " visited " + std::to_string(visits[i]) + " times");
    }
    if (v.size() < 4) {
        rep.add("loop needs at least 4 cells");
        return rep;
    }
    for (size_t i = 0; i < v.size(); ++i) {
        Coord a = v[i], b = v[(i + 1) % v.size()];
        if (!adjacent(a, b)) {
            rep.add("cells " + to_string(a) + " and " + to_string(b) + " are consecutive but not adjacent");
            geometry_ok = false;
        }
    }
    if (!geometry_ok) return rep;
    // number of maximal runs of each region along the cyclic order
    std::vector<int> arcs(inst.num_regions(), 0);
    for (size_t i = 0; i < v.size(); ++i) {
        int here = inst.region(v[i]), before = inst.region(v[(i + v.size() - 1) % v.size()]);
        if (here != before) ++arcs[here];
    }
    for (int id = 0; id < inst.num_regions(); ++id) {
        int a = arcs[id] == 0 ? 1 : arcs[id]; // a region holding the whole loop is one arc
        if (a != 1) rep.add("region " + std::to_string(id) + " entered " + std::to_string(a) + " times");
    }
    return rep;
}

inline std::vector<Coord> loop_from_edges(const EdgeSet& edges)
{
    std::map<Coord, std::vector<Coord>> adj;
    for (const Edge& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<Coord> out;
    if (adj.empty()) return out;
    Coord start = adj.begin()->first, prev = start, cur = start;
    do {
        out.push_back(cur);
        auto& ns = adj[cur];
        Coord nxt = ns[0] == prev && out.size() > 1 ? ns[1] : ns[0];
        if (out.size() == 1) nxt = std::min(ns[0], ns[1]);
        prev = cur;
        cur = nxt;
    } while (cur != start && out.size() <= edges.size());
    return out;
}

inline EdgeSet edges_of_loop(const std::vector<Coord>& v)
{
    EdgeSet out;
    for (size_t i = 0; i < v.size(); ++i) out.insert(Edge(v[i], v[(i + 1) % v.size()]));
    return out;
}

inline Enumeration<CellLoop> enumerate(const EntryExitInstance& inst, long long cap, std::uint64_t node_budget = 0)
{
    check_cap(cap);
    Enumeration<CellLoop> out;
    if (!check_regions(inst).ok()) return out;
    Dims dims = inst.dims();
    std::vector<Edge> edges = grid_edges(dims);
    CycleSearch s(dims.size());
    int k = inst.num_regions();
    std::vector<std::vector<int>> crossing(k);
    for (const Edge& e : edges) {
        int id = s.add_edge(dims.index(e.a), dims.index(e.b));
        int ra = inst.region(e.a), rb = inst.region(e.b);
        if (ra != rb) {
            crossing[ra].push_back(id);
            crossing[rb].push_back(id);
        }
    }
    if (k > 1)
        for (int r = 0; r < k; ++r) s.add_exact_count(crossing[r], 2);
    SearchOptions opts;
    opts.node_budget = node_budget;
    auto st = s.search(
        [&](const std::vector<EdgeState>& state) {
            if (static_cast<long long>(out.solutions.size()) == cap) {
                out.truncated = true;
                return false;
            }
            EdgeSet es;
            for (int e : CycleSearch::in_edges(state)) es.insert(edges[e]);
            out.solutions.push_back(canonical_loop({loop_from_edges(es)}));
            return true;
        },
        opts);
    if (st == SearchStatus::budget_exhausted) throw BudgetError("entry-exit search exceeded the node budget");
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

inline std::optional<CellLoop> solve(const EntryExitInstance& inst)
{
    auto e = enumerate(inst, 1);
    if (e.solutions.empty()) return std::nullopt;
    return e.solutions.front();
}

inline json entryexit_json(const EntryExitInstance& inst)
{
    json rows = json::array();
    for (int r = 0; r < inst.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < inst.cols; ++c) row.push_back(inst.region({r, c}));
        rows.push_back(row);
    }
    return json{{"rows", inst.rows}, {"cols", inst.cols}, {"region_of", rows}};
}

inline EntryExitInstance entryexit_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    EntryExitInstance inst;
    inst.rows = int_field(j, "rows", path, 1);
    inst.cols = int_field(j, "cols", path, 1);
    std::string rp = key_path(path, "region_of");
    const json& m = array_at(field(j, "region_of", path), rp);
    if (static_cast<int>(m.size()) != inst.rows) throw InputError(rp + ": expected " + std::to_string(inst.rows) + " rows");
    for (int r = 0; r < inst.rows; ++r) {
        const json& row = array_at(m[r], index_path(rp, r));
        if (static_cast<int>(row.size()) != inst.cols)
            throw InputError(index_path(rp, r) + ": expected " + std::to_string(inst.cols) + " entries");
        for (int c = 0; c < inst.cols; ++c) {
            long long id = as_int(row[c], index_path(index_path(rp, r), c));
            if (id < 0) throw InputError(index_path(index_path(rp, r), c) + ": negative region id");
            inst.region_of.push_back(static_cast<int>(id));
        }
    }
    return inst;
}

inline json solution_json(const CellLoop& s) { return json{{"loop", jsonio::coord_list_json(s.loop)}}; }

inline CellLoop cell_loop_from_json(const json& j, const std::string& path = "$")
{
    return {jsonio::as_coord_list(jsonio::field(j, "loop", path), jsonio::key_path(path, "loop"))};
}

} // namespace tmc
