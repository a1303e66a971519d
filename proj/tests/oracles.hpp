#pragma once

// Brute-force reference implementations used only by the tests. They share
// nothing with the library search code beyond the basic geometry types.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include <random>

#include "tmc/entryexit.hpp"
#include "tmc/grandtour.hpp"
#include "tmc/metacell.hpp"
#include "tmc/zahlen.hpp"

namespace oracle {

using tmc::Coord;
using tmc::Dims;
using tmc::Edge;
using tmc::EdgeSet;

// All Hamiltonian cycles of the grid graph restricted to `allowed` edges,
// found by plain DFS from vertex 0 (each cycle reported once as an edge set).
inline std::set<EdgeSet> hamiltonian_cycles(Dims d, const std::vector<Edge>& allowed)
{
    int n = d.size();
    std::set<EdgeSet> out;
    if (n < 4) return out;
    std::vector<std::vector<int>> adj(n);
    for (auto& e : allowed) {
        adj[d.index(e.a)].push_back(d.index(e.b));
        adj[d.index(e.b)].push_back(d.index(e.a));
    }
    std::vector<int> path{0};
    std::vector<bool> used(n, false);
    used[0] = true;
    std::function<void()> go = [&] {
        int v = path.back();
        if (static_cast<int>(path.size()) == n) {
            for (int w : adj[v])
                if (w == 0) {
                    EdgeSet es;
                    for (int i = 0; i < n; ++i) es.insert(Edge(d.at(path[i]), d.at(path[(i + 1) % n])));
                    out.insert(es);
                }
            return;
        }
        for (int w : adj[v]) {
            if (used[w]) continue;
            used[w] = true;
            path.push_back(w);
            go();
            path.pop_back();
            used[w] = false;
        }
    };
    go();
    return out;
}

// every vertex of d has degree 2 and one walk uses all edges
inline bool is_hamiltonian_cycle(const EdgeSet& es, Dims d)
{
    if (static_cast<int>(es.size()) != d.size() || es.empty()) return false;
    std::map<Coord, std::vector<Coord>> adj;
    for (auto& e : es) {
        if (!d.contains(e.a) || !d.contains(e.b)) return false;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    if (static_cast<int>(adj.size()) != d.size()) return false;
    for (auto& [v, ns] : adj)
        if (ns.size() != 2) return false;
    Coord start = es.begin()->a, prev = start, cur = es.begin()->b;
    size_t steps = 1;
    while (cur != start) {
        auto& ns = adj[cur];
        Coord nxt = ns[0] == prev ? ns[1] : ns[0];
        prev = cur;
        cur = nxt;
        ++steps;
    }
    return steps == es.size();
}

// Hamiltonian cell cycles as vertex sequences starting at (0,0), both directions
inline std::vector<std::vector<Coord>> cell_cycles(Dims d)
{
    std::vector<std::vector<Coord>> out;
    auto edges = tmc::grid_edges(d);
    for (auto& es : hamiltonian_cycles(d, edges)) {
        std::map<Coord, std::vector<Coord>> adj;
        for (auto& e : es) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
        for (int dir = 0; dir < 2; ++dir) {
            std::vector<Coord> seq{{0, 0}};
            Coord prev{0, 0}, cur = adj[{0, 0}][dir];
            while (cur != Coord{0, 0}) {
                seq.push_back(cur);
                auto& ns = adj[cur];
                Coord nxt = ns[0] == prev ? ns[1] : ns[0];
                prev = cur;
                cur = nxt;
            }
            out.push_back(seq);
        }
    }
    return out;
}

// ---- per-puzzle oracles on top of the plain searches above ----

using namespace tmc;

inline std::set<EdgeSet> tours(const GrandTourInstance& inst)
{
    std::set<EdgeSet> out;
    for (auto& c : hamiltonian_cycles(inst.dims(), grid_edges(inst.dims())))
        if (std::includes(c.begin(), c.end(), inst.forced.begin(), inst.forced.end())) out.insert(c);
    return out;
}

// number of times the cyclic sequence switches into each region
inline bool arcs_ok(const EntryExitInstance& inst, const std::vector<Coord>& seq)
{
    std::map<int, int> entries;
    for (size_t i = 0; i < seq.size(); ++i) {
        int a = inst.region(seq[(i + seq.size() - 1) % seq.size()]), b = inst.region(seq[i]);
        if (a != b) ++entries[b];
    }
    for (int id = 0; id < inst.num_regions(); ++id)
        if (entries[id] > 1) return false;
    return true;
}

// random partition into connected regions by randomized flood growth
inline EntryExitInstance random_regions(std::mt19937& rng, int R, int C)
{
    Dims d{R, C};
    std::vector<int> id(d.size(), -1);
    int k = 1 + static_cast<int>(rng() % std::min(d.size(), 5));
    std::vector<int> seeds;
    while (static_cast<int>(seeds.size()) < k) {
        int s = static_cast<int>(rng() % d.size());
        if (id[s] < 0) {
            id[s] = static_cast<int>(seeds.size());
            seeds.push_back(s);
        }
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (int t = 0; t < d.size(); ++t) {
            int i = static_cast<int>(rng() % d.size());
            if (id[i] >= 0) continue;
            auto ns = neighbors(d.at(i), d);
            Coord n = ns[rng() % ns.size()];
            if (id[d.index(n)] >= 0) {
                id[i] = id[d.index(n)];
                grew = true;
            }
        }
        for (int v : id)
            if (v < 0) grew = true;
    }
    return {R, C, id};
}

// every simple path (or loop) from the corner, kept when its value multiset is exactly the distinct values
inline std::set<std::vector<Coord>> zahlen_paths(const ZahlenInstance& z)
{
    Dims d = z.dims();
    std::set<long long> want(z.values.begin(), z.values.end());
    std::set<std::vector<Coord>> out;
    std::vector<Coord> path{{0, 0}};
    std::set<Coord> used{{0, 0}};
    auto accept = [&] {
        std::multiset<long long> vals;
        for (Coord p : path) vals.insert(z.value(p));
        if (vals.size() != want.size()) return false;
        return std::set<long long>(vals.begin(), vals.end()) == want;
    };
    std::function<void()> go = [&] {
        Coord h = path.back();
        if (z.closed) {
            if (path.size() >= 4 && adjacent(h, {0, 0}) && path[1] < h && accept()) out.insert(path);
        } else if (h == Coord{z.rows - 1, z.cols - 1}) {
            if (accept()) out.insert(path);
            return;
        }
        for (Coord q : neighbors(h, d)) {
            if (used.count(q)) continue;
            used.insert(q);
            path.push_back(q);
            go();
            path.pop_back();
            used.erase(q);
        }
    };
    go();
    return out;
}

// brute force: all subsets of aligned adjacencies that form a Hamiltonian cycle using every forced edge
inline std::set<EdgeSet> metacell_cycles(const MetacellGridInstance& inst)
{
    Dims d = inst.dims();
    std::vector<Edge> cand;
    for (auto& e : grid_edges(d)) {
        Dir dir = dir_between(e.a, e.b);
        if (inst.at(e.a).has(dir) && inst.at(e.b).has(opposite(dir))) cand.push_back(e);
    }
    std::set<EdgeSet> out;
    for (unsigned mask = 0; mask < (1u << cand.size()); ++mask) {
        EdgeSet es;
        for (size_t i = 0; i < cand.size(); ++i)
            if (mask >> i & 1) es.insert(cand[i]);
        if (!oracle::is_hamiltonian_cycle(es, d)) continue;
        bool forced_ok = true;
        for (int i = 0; i < d.size(); ++i) {
            Coord p = d.at(i);
            if (auto f = inst.at(p).forced; f && !es.count(Edge(p, step(p, *f)))) forced_ok = false;
        }
        if (forced_ok) out.insert(es);
    }
    return out;
}

} // namespace oracle
