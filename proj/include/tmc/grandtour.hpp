#pragma once

#include <optional>

#include "tmc/cycle_search.hpp"
#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/report.hpp"

namespace tmc {

struct GrandTourInstance {
    int vrows = 0, vcols = 0;
    EdgeSet forced;
    Dims dims() const { return {vrows, vcols}; }
    bool operator==(const GrandTourInstance&) const = default;
};

struct GrandTourSolution {
    EdgeSet loop;
    bool operator==(const GrandTourSolution&) const = default;
    auto operator<=>(const GrandTourSolution& o) const { return loop <=> o.loop; }
};

inline Report validate(const GrandTourInstance& inst, const GrandTourSolution& sol)
{
    Report rep;
    Dims dims = inst.dims();
    std::vector<int> deg(dims.size(), 0);
    EdgeSet good;
    for (const Edge& e : sol.loop) {
        if (!dims.contains(e.a) || !dims.contains(e.b) || !adjacent(e.a, e.b)) {
            rep.add("edge " + to_string(e) + " is not a grid edge");
            continue;
        }
        good.insert(e);
        ++deg[dims.index(e.a)];
        ++deg[dims.index(e.b)];
    }
    std::vector<std::string> uncovered;
    for (int i = 0; i < dims.size(); ++i) {
        if (deg[i] == 0) uncovered.push_back(to_string(dims.at(i)));
        else if (deg[i] != 2)
            rep.add("vertex " + to_string(dims.at(i)) + " has degree " + std::to_string(deg[i]));
    }
    if (!uncovered.empty()) {
        std::string s;
        for (auto& u : uncovered) s += (s.empty() ? "" : " ") + u;
        rep.add("uncovered vertices: " + s);
    }
    auto cls = classify_edge_set(good, dims);
    if (cls.cycles > 1) rep.add("loop is disconnected into " + std::to_string(cls.cycles) + " cycles");
    for (const Edge& e : inst.forced)
        if (!sol.loop.count(e)) rep.add("forced edge " + to_string(e) + " unused");
    return rep;
}

inline Enumeration<GrandTourSolution> enumerate(const GrandTourInstance& inst, long long cap,
                                                std::uint64_t node_budget = 0)
{
    check_cap(cap);
    Enumeration<GrandTourSolution> out;
    Dims dims = inst.dims();
    for (const Edge& e : inst.forced)
        if (!dims.contains(e.a) || !dims.contains(e.b)) return out;
    std::vector<Edge> edges = grid_edges(dims);
    CycleSearch s(dims.size());
    for (const Edge& e : edges) {
        int id = s.add_edge(dims.index(e.a), dims.index(e.b));
        if (inst.forced.count(e)) s.fix(id, true);
    }
    SearchOptions opts;
    opts.node_budget = node_budget;
    auto st = s.search(
        [&](const std::vector<EdgeState>& state) {
            if (static_cast<long long>(out.solutions.size()) == cap) {
                out.truncated = true;
                return false;
            }
            GrandTourSolution sol;
            for (int e : CycleSearch::in_edges(state)) sol.loop.insert(edges[e]);
            out.solutions.push_back(std::move(sol));
            return true;
        },
        opts);
    if (st == SearchStatus::budget_exhausted) throw BudgetError("grand tour search exceeded the node budget");
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

inline std::optional<GrandTourSolution> solve(const GrandTourInstance& inst)
{
    auto e = enumerate(inst, 1);
    if (e.solutions.empty()) return std::nullopt;
    return e.solutions.front();
}

// The "2n" bound is read two ways: n as the side length of an n x n vertex
// grid, and n as the vertex count. A Hamiltonian cycle has exactly as many
// edges as vertices, which is the sharp limit; it is reported alongside.
struct ForcedBoundCheck {
    bool applicable = false;
    int forced = 0;
    int side_limit = 0;   // 2 * side
    int vertex_limit = 0; // 2 * vertices
    int cycle_limit = 0;  // vertices
    bool exceeds_side = false;
    bool exceeds_vertex = false;
    bool exceeds_cycle = false;
};

// count form, so that counts no grid can hold (5 edges on 2x2) can still be checked
inline ForcedBoundCheck forced_edge_bound_check(int vrows, int vcols, int forced)
{
    ForcedBoundCheck r;
    r.forced = forced;
    if (vrows != vcols) return r;
    r.applicable = true;
    int n = vrows, v = n * n;
    r.side_limit = 2 * n;
    r.vertex_limit = 2 * v;
    r.cycle_limit = v;
    r.exceeds_side = r.forced > r.side_limit;
    r.exceeds_vertex = r.forced > r.vertex_limit;
    r.exceeds_cycle = r.forced > r.cycle_limit;
    return r;
}

inline ForcedBoundCheck forced_edge_bound_check(const GrandTourInstance& inst)
{
    return forced_edge_bound_check(inst.vrows, inst.vcols, static_cast<int>(inst.forced.size()));
}

inline json bound_check_json(const ForcedBoundCheck& r)
{
    if (!r.applicable) return json{{"applicable", false}, {"result", "not applicable"}, {"forced", r.forced}};
    auto verdict = [](bool ex, int lim) { return json{{"limit", lim}, {"result", ex ? "exceeds" : "ok"}}; };
    return json{{"applicable", true},
                {"forced", r.forced},
                {"side_length_reading", verdict(r.exceeds_side, r.side_limit)},
                {"vertex_count_reading", verdict(r.exceeds_vertex, r.vertex_limit)},
                {"cycle_edge_limit", verdict(r.exceeds_cycle, r.cycle_limit)}};
}

inline json grandtour_json(const GrandTourInstance& inst)
{
    return json{{"vrows", inst.vrows}, {"vcols", inst.vcols}, {"forced", jsonio::edge_set_json(inst.forced)}};
}

inline GrandTourInstance grandtour_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    GrandTourInstance inst;
    inst.vrows = int_field(j, "vrows", path, 1);
    inst.vcols = int_field(j, "vcols", path, 1);
    inst.forced = as_edge_set(field(j, "forced", path), key_path(path, "forced"));
    for (const Edge& e : inst.forced)
        if (!inst.dims().contains(e.a) || !inst.dims().contains(e.b))
            throw InputError(key_path(path, "forced") + ": edge " + to_string(e) + " outside the vertex grid");
    return inst;
}

inline json solution_json(const GrandTourSolution& s) { return json{{"loop", jsonio::edge_set_json(s.loop)}}; }

inline GrandTourSolution grandtour_solution_from_json(const json& j, const std::string& path = "$")
{
    return {jsonio::as_edge_set(jsonio::field(j, "loop", path), jsonio::key_path(path, "loop"))};
}

} // namespace tmc
