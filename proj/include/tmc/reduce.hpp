#pragma once

#include <variant>

#include "tmc/gadget.hpp"
#include "tmc/grandtour.hpp"
#include "tmc/metacell.hpp"
#include "tmc/zahlen.hpp"

namespace tmc {

enum class Target { grandtour, entryexit, yagit, zahlen };

inline const char* target_name(Target t)
{
    switch (t) {
    case Target::grandtour: return "grandtour";
    case Target::entryexit: return "entryexit";
    case Target::yagit: return "yagit";
    case Target::zahlen: return "zahlen";
    }
    return "?";
}

inline std::optional<Target> parse_target(const std::string& s)
{
    for (Target t : {Target::grandtour, Target::entryexit, Target::yagit, Target::zahlen})
        if (s == target_name(t)) return t;
    return std::nullopt;
}

// one source cell's block in the target
struct Placement {
    Coord cell;
    Coord origin;
    std::string gadget;
    int n = 0; // zahlen block number
    D4Transform t{};
    bool operator==(const Placement&) const = default;
};

struct TrailCell {
    Coord cell;
    int label = 0; // the k of "nk"
    long long value = 0;
    bool operator==(const TrailCell&) const = default;
};

struct ReductionTrace {
    Target target = Target::grandtour;
    MetacellGridInstance source;
    int block_size = 0;
    int block_n = 0; // family index for grandtour / entryexit blocks
    bool closed = false;
    bool trivial_unsat = false;
    std::vector<Placement> blocks; // row-major over source cells
    std::vector<Edge> merged;      // forced crossings (grandtour edges, entryexit cell pairs)
    // yagit
    std::vector<Coord> turning_dots;
    std::optional<Coord> extra_sheep;
    std::vector<Coord> wrap;
    // zahlen
    std::vector<TrailCell> trail;

    const Placement& block(Coord p) const { return blocks.at(source.dims().index(p)); }
    bool operator==(const ReductionTrace&) const = default;
};

using TargetInstance = std::variant<GrandTourInstance, EntryExitInstance, YagitInstance, ZahlenInstance>;
using TargetSolution = std::variant<GrandTourSolution, CellLoop, YagitSolution, CellPath>;

struct Reduction {
    TargetInstance instance;
    ReductionTrace trace;
};

struct ReduceOptions {
    int block_n = 0; // 0 picks the default: 1 for grandtour, 2 for entryexit
    bool closed = false;
};

inline Report validate_target(const TargetInstance& inst, const TargetSolution& sol)
{
    if (inst.index() != sol.index()) throw ArgumentError("solution kind does not match the instance");
    switch (inst.index()) {
    case 0: return validate(std::get<0>(inst), std::get<0>(sol));
    case 1: return validate(std::get<1>(inst), std::get<1>(sol));
    case 2: return validate(std::get<2>(inst), std::get<2>(sol));
    default: return validate(std::get<3>(inst), std::get<3>(sol));
    }
}

namespace detail {

inline Gadget placed_gadget(const Placement& b) { return transform_gadget(builtin(b.gadget, b.n), b.t); }

// first transform (rotation, then reflection) taking the block's exits onto the cell's
inline D4Transform orient(const Gadget& g, const MetacellSpec& s, bool match_forced)
{
    for (const D4Transform& t : all_transforms()) {
        bool ok = true;
        for (auto& [d, p] : g.exits)
            if (!s.has(apply_transform(t, d))) ok = false;
        if (match_forced && (!g.forced_port || !s.forced || apply_transform(t, *g.forced_port) != *s.forced)) ok = false;
        if (ok) return t;
    }
    throw InvariantError("no orientation of " + g.name + " fits the cell");
}

inline void require_valid(const MetacellGridInstance& src)
{
    auto rep = validate_instance(src);
    if (!rep.ok()) throw InputError("source instance: " + rep.violations.front());
}

// the two cycle neighbours of every cell, as directions
inline std::vector<std::vector<Dir>> used_dirs(const MetacellGridInstance& src, const MetacellCycle& c)
{
    std::vector<std::vector<Dir>> out(src.dims().size());
    for (const Edge& e : c.edges) {
        out[src.dims().index(e.a)].push_back(dir_between(e.a, e.b));
        out[src.dims().index(e.b)].push_back(dir_between(e.b, e.a));
    }
    return out;
}

inline void require_cycle(const MetacellGridInstance& src, const MetacellCycle& c)
{
    auto rep = validate_cycle(src, c);
    if (!rep.ok()) throw InputError("source cycle: " + rep.violations.front());
}

// the corner block must leave right and down into matching exits
inline bool corner_ready(const MetacellGridInstance& s)
{
    if (s.rows < 2 || s.cols < 2) return false;
    return s.at({0, 0}).has(Dir::right) && s.at({0, 0}).has(Dir::down) && s.at({0, 1}).has(Dir::left) &&
           s.at({1, 0}).has(Dir::up);
}

inline Coord port_at(const Placement& b, const Gadget& placed, Dir d) { return offset(placed.exits.at(d), b.origin); }

// cover targets (grandtour vertices, entryexit cells) share the block layout
inline std::vector<Placement> cover_blocks(const MetacellGridInstance& src, Target target, int n)
{
    int S = 4 * n + 1;
    std::vector<Placement> out;
    Dims d = src.dims();
    for (int i = 0; i < d.size(); ++i) {
        Coord p = d.at(i);
        const MetacellSpec& s = src.at(p);
        Placement b;
        b.cell = p;
        b.origin = {p.row * S, p.col * S};
        bool gt_forced = target == Target::grandtour && s.forced && n == 1;
        b.gadget = gt_forced ? "gt5-forced" : (target == Target::grandtour ? "gt" : "ee") + std::to_string(S);
        b.t = orient(builtin(b.gadget), s, gt_forced);
        out.push_back(b);
    }
    return out;
}

inline std::vector<Edge> forced_crossings(const MetacellGridInstance& src, const std::vector<Placement>& blocks)
{
    std::vector<Edge> out;
    Dims d = src.dims();
    for (int i = 0; i < d.size(); ++i) {
        Coord p = d.at(i);
        auto f = src.at(p).forced;
        if (!f) continue;
        Coord q = step(p, *f);
        const Placement& a = blocks[i];
        const Placement& b = blocks[d.index(q)];
        Edge e(port_at(a, placed_gadget(a), *f), port_at(b, placed_gadget(b), opposite(*f)));
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- grandtour / entryexit ----

inline Reduction reduce_cover(const MetacellGridInstance& src, Target target, int n)
{
    if (n < 1) throw ArgumentError("block index must be at least 1");
    int S = 4 * n + 1;
    Reduction out;
    ReductionTrace& tr = out.trace;
    tr.target = target;
    tr.source = src;
    tr.block_size = S;
    tr.block_n = n;
    tr.blocks = cover_blocks(src, target, n);
    tr.merged = forced_crossings(src, tr.blocks);
    if (target == Target::grandtour) {
        GrandTourInstance g{src.rows * S, src.cols * S, {}};
        for (auto& b : tr.blocks)
            for (const Edge& e : placed_gadget(b).forced) g.forced.insert(offset(e, b.origin));
        for (const Edge& e : tr.merged) g.forced.insert(e);
        out.instance = g;
        return out;
    }
    EntryExitInstance ee{src.rows * S, src.cols * S, {}};
    Dims td = ee.dims();
    std::vector<int> raw(td.size());
    int stride = S * S;
    for (size_t k = 0; k < tr.blocks.size(); ++k) {
        Gadget g = placed_gadget(tr.blocks[k]);
        Dims bd = g.dims();
        for (int i = 0; i < bd.size(); ++i)
            raw[td.index(offset(bd.at(i), tr.blocks[k].origin))] = static_cast<int>(k) * stride + g.region_of[i];
    }
    // merge the corridor pairs across forced exits
    std::vector<int> parent(src.dims().size() * stride);
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const Edge& e : tr.merged) parent[find(raw[td.index(e.a)])] = find(raw[td.index(e.b)]);
    std::map<int, int> dense;
    for (int v : raw) {
        int r = find(v);
        dense.emplace(r, static_cast<int>(dense.size()));
        ee.region_of.push_back(dense[r]);
    }
    out.instance = ee;
    return out;
}


// edges of the target loop through one block for the two exits the source cycle uses
inline EdgeSet block_completion(const Placement& b, Dir x, Dir y)
{
    static std::map<std::tuple<std::string, int, int, bool, int, int>, EdgeSet> cache;
    if (y < x) std::swap(x, y);
    auto key = std::make_tuple(b.gadget, b.n, b.t.rotation, b.t.reflected, static_cast<int>(x), static_cast<int>(y));
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto c = gadget_completion(placed_gadget(b), x, y);
        if (!c) throw InvariantError(b.gadget + " has no traversal for " + pair_label(x, y));
        it = cache.emplace(key, *c).first;
    }
    EdgeSet out;
    for (const Edge& e : it->second) out.insert(offset(e, b.origin));
    return out;
}

inline EdgeSet lift_cover(const MetacellCycle& c, const ReductionTrace& tr)
{
    auto used = used_dirs(tr.source, c);
    EdgeSet out;
    Dims d = tr.source.dims();
    for (int i = 0; i < d.size(); ++i) {
        auto part = block_completion(tr.blocks[i], used[i][0], used[i][1]);
        out.insert(part.begin(), part.end());
    }
    for (const Edge& e : c.edges) {
        Dir dir = dir_between(e.a, e.b);
        const Placement& a = tr.block(e.a);
        const Placement& b = tr.block(e.b);
        out.insert(Edge(port_at(a, placed_gadget(a), dir), port_at(b, placed_gadget(b), opposite(dir))));
    }
    return out;
}

// read the source cycle off the crossings between blocks
inline MetacellCycle read_cover(const EdgeSet& loop, const ReductionTrace& tr)
{
    int S = tr.block_size;
    Dims sd = tr.source.dims();
    std::vector<Gadget> placed;
    for (auto& b : tr.blocks) placed.push_back(placed_gadget(b));
    MetacellCycle c;
    for (const Edge& e : loop) {
        Coord p{e.a.row / S, e.a.col / S}, q{e.b.row / S, e.b.col / S};
        if (p == q) continue;
        Dir dir = dir_between(p, q);
        const MetacellSpec& sp = tr.source.at(p);
        const MetacellSpec& sq = tr.source.at(q);
        bool ok = sp.has(dir) && sq.has(opposite(dir)) &&
                  e == Edge(port_at(tr.block(p), placed[sd.index(p)], dir), port_at(tr.block(q), placed[sd.index(q)], opposite(dir)));
        if (!ok)
            throw ExtractionError("loop crosses from block " + to_string(p) + " to block " + to_string(q) +
                                  " away from the ports at " + to_string(e));
        c.edges.insert(Edge(p, q));
    }
    return c;
}

// ---- zahlen ----

inline int snake_index(Coord p, int cols) { return p.row * cols + (p.row % 2 == 0 ? p.col : cols - 1 - p.col); }

inline Reduction reduce_zahlen(const MetacellGridInstance& src, bool closed)
{
    if (!src.all_forced()) throw UnsupportedError("the zahlen target needs a forced exit in every cell");
    Reduction out;
    ReductionTrace& tr = out.trace;
    tr.target = Target::zahlen;
    tr.source = src;
    tr.block_size = 3;
    tr.closed = closed;
    if (!corner_ready(src)) {
        tr.trivial_unsat = true;
        out.instance = ZahlenInstance{2, 2, {0, 0, 0, 0}, false};
        return out;
    }
    int R = src.rows, C = src.cols;
    ZahlenInstance z;
    z.rows = closed ? 3 * R : 3 * R + 2;
    z.cols = 3 * C + 2;
    z.closed = closed;
    z.values.assign(z.rows * z.cols, 0);
    Dims zd = z.dims();
    long long base = 3LL * R * C;
    auto put_trail = [&](Coord p, int k) {
        tr.trail.push_back({p, k, base + k});
        z.values[zd.index(p)] = base + k;
    };
    Dims sd = src.dims();
    for (int i = 0; i < sd.size(); ++i) {
        Coord p = sd.at(i);
        Placement b;
        b.cell = p;
        b.origin = {3 * p.row, 2 + 3 * p.col};
        if (p == Coord{0, 0}) {
            b.gadget = "zs-corner";
        } else {
            b.gadget = "zs3";
            b.n = snake_index(p, C);
            b.t = orient(builtin("zs3"), src.at(p), true);
        }
        tr.blocks.push_back(b);
        Gadget g = placed_gadget(b);
        for (int j = 0; j < 9; ++j) {
            Coord q = offset(Coord{j / 3, j % 3}, b.origin);
            const std::string& e = g.value_exprs[j];
            if (!e.empty() && e[0] == 'n') put_trail(q, std::stoi(e.substr(1)));
            else z.values[zd.index(q)] = zahlen_value(e, b.n, [](int) { return 0LL; });
        }
    }
    put_trail({0, 1}, 3);
    put_trail({1, 1}, 4);
    put_trail({2, 1}, 5);
    if (closed) {
        put_trail({2, 0}, 6);
        put_trail({1, 0}, 7);
    } else {
        for (int r = 2; r <= 3 * R; ++r) put_trail({r, 0}, r + 4);
        for (int c = 0; c < z.cols; ++c) put_trail({3 * R + 1, c}, 3 * R + 5 + c);
    }
    std::sort(tr.trail.begin(), tr.trail.end(), [](auto& a, auto& b) { return a.label < b.label; });
    out.instance = z;
    return out;
}

inline CellPath lift_zahlen(const MetacellCycle& c, const ReductionTrace& tr)
{
    auto used = used_dirs(tr.source, c);
    Dims sd = tr.source.dims();
    CellPath out;
    auto add = [&](std::initializer_list<Coord> ps) { out.cells.insert(out.cells.end(), ps); };
    add({{0, 0}, {0, 1}, {1, 1}});
    const Placement& corner = tr.block({0, 0});
    auto corner_cells = [&](std::initializer_list<Coord> ps) {
        for (Coord p : ps) out.cells.push_back(offset(p, corner.origin));
    };
    corner_cells({{1, 0}, {1, 1}, {1, 2}});
    // walk the cycle from the corner, leaving right and coming back from below
    Coord prev{0, 0}, cur{0, 1};
    while (cur != Coord{0, 0}) {
        Dir in = dir_between(cur, prev);
        auto& u = used[sd.index(cur)];
        Dir exit = u[0] == in ? u[1] : u[0];
        const Placement& b = tr.block(cur);
        auto path = zahlen_block_path(placed_gadget(b), in, exit);
        if (!path) throw InvariantError("zs3 block has no path for " + pair_label(in, exit));
        for (Coord p : *path) out.cells.push_back(offset(p, b.origin));
        prev = cur;
        cur = step(cur, exit);
    }
    if (prev != Coord{1, 0}) throw InvariantError("cycle does not return to the corner from below");
    corner_cells({{2, 1}, {2, 0}});
    out.cells.push_back({2, 1});
    out.cells.push_back({2, 0});
    if (tr.closed) {
        out.cells.push_back({1, 0});
    } else {
        int R = tr.source.rows, C = tr.source.cols;
        for (int r = 3; r <= 3 * R + 1; ++r) out.cells.push_back({r, 0});
        for (int col = 1; col < 3 * C + 2; ++col) out.cells.push_back({3 * R + 1, col});
    }
    return out;
}

inline MetacellCycle read_zahlen(const CellPath& path, const ReductionTrace& tr)
{
    int R = tr.source.rows, C = tr.source.cols;
    auto block_of = [&](Coord p) -> std::optional<Coord> {
        if (p.row < 0 || p.row >= 3 * R || p.col < 2 || p.col >= 3 * C + 2) return std::nullopt;
        return Coord{p.row / 3, (p.col - 2) / 3};
    };
    MetacellCycle c;
    for (size_t i = 0; i + 1 < path.cells.size(); ++i) {
        auto p = block_of(path.cells[i]), q = block_of(path.cells[i + 1]);
        if (!p || !q || *p == *q) continue;
        Dir dir = dir_between(*p, *q);
        const Placement& a = tr.block(*p);
        const Placement& b = tr.block(*q);
        Gadget ga = placed_gadget(a), gb = placed_gadget(b);
        bool ok = ga.exits.count(dir) && gb.exits.count(opposite(dir)) && path.cells[i] == port_at(a, ga, dir) &&
                  path.cells[i + 1] == port_at(b, gb, opposite(dir));
        if (!ok)
            throw ExtractionError("path crosses from block " + to_string(*p) + " to block " + to_string(*q) +
                                  " away from the ports");
        c.edges.insert(Edge(*p, *q));
    }
    return c;
}

// ---- yagit ----

inline Coord yagit_origin(Coord p) { return {1 + 3 * p.row, 1 + 3 * p.col}; }

inline std::vector<Coord> wrap_line(int R, int C)
{
    std::vector<Coord> w;
    int bottom = 3 * R + 1, right = 3 * C + 1;
    for (int r = 0; r <= bottom; ++r) w.push_back({r, 1});
    for (int c = 2; c <= right; ++c) w.push_back({bottom, c});
    for (int r = bottom - 1; r >= 1; --r) w.push_back({r, right});
    for (int c = right - 1; c >= 4; --c) w.push_back({1, c});
    w.push_back({0, 4});
    return w;
}

inline Reduction reduce_yagit(const MetacellGridInstance& src)
{
    if (!src.all_forced()) throw UnsupportedError("the yagit target needs a forced exit in every cell");
    Reduction out;
    ReductionTrace& tr = out.trace;
    tr.target = Target::yagit;
    tr.source = src;
    tr.block_size = 3;
    if (!corner_ready(src)) {
        tr.trivial_unsat = true;
        out.instance = YagitInstance{1, 1, {Animal::none}, {}};
        return out;
    }
    int R = src.rows, C = src.cols;
    YagitInstance y;
    y.rows = 3 * R + 2;
    y.cols = 3 * C + 2;
    y.animals.assign(y.rows * y.cols, Animal::none);
    Dims yd = y.dims();
    auto set = [&](Coord p, Animal a) { y.animals[yd.index(p)] = a; };
    // sheep wrap, open at the top left where the corner column reaches the border
    for (int r = 0; r < y.rows; ++r) set({r, 0}, Animal::sheep), set({r, y.cols - 1}, Animal::sheep);
    for (int c = 0; c < y.cols; ++c) set({y.rows - 1, c}, Animal::sheep);
    for (int c = 4; c < y.cols; ++c) set({0, c}, Animal::sheep);
    set({0, 1}, Animal::wolf);
    set({0, 3}, Animal::wolf);
    int bottom = 3 * R + 1, right = 3 * C + 1;
    for (int i = 1; i <= bottom; ++i) y.dots.insert({i, 1}), y.dots.insert({i, right});
    for (int j = 1; j <= right; ++j) {
        y.dots.insert({bottom, j});
        if (j != 2 && j != 3) y.dots.insert({1, j});
    }
    Dims sd = src.dims();
    for (int i = 0; i < sd.size(); ++i) {
        Coord p = sd.at(i);
        Placement b;
        b.cell = p;
        b.origin = yagit_origin(p);
        if (p == Coord{0, 0}) {
            b.gadget = "yagit-corner";
        } else {
            b.gadget = "yagit3";
            b.t = orient(builtin("yagit3"), src.at(p), true);
        }
        tr.blocks.push_back(b);
        Gadget g = placed_gadget(b);
        for (int j = 0; j < 9; ++j) set(offset(Coord{j / 3, j % 3}, b.origin), g.animals[j]);
        for (Coord d : g.dots) y.dots.insert(offset(d, b.origin));
        if (p == Coord{0, 0}) {
            for (Coord d : g.dots) tr.turning_dots.push_back(offset(d, b.origin));
            continue;
        }
        // exits that face the grid boundary are walled off with a wolf
        for (auto& [dir, cell] : g.exits)
            if (!sd.contains(step(p, dir))) set(offset(cell, b.origin), Animal::wolf);
    }
    Coord sheep{2, 4}; // port cell of the block right of the corner
    tr.extra_sheep = sheep;
    set(sheep, Animal::sheep);
    tr.wrap = wrap_line(R, C);
    out.instance = y;
    return out;
}

inline TraversalType pattern_for(const MetacellSpec& s, Dir x, Dir y)
{
    Dir other = x == *s.forced ? y : x;
    return other == opposite(*s.forced) ? TraversalType::a : TraversalType::b;
}

inline EdgeSet block_pattern(const Placement& b, TraversalType k)
{
    EdgeSet out;
    for (const Edge& e : apply_transform(b.t, traversal_pattern(k), {4, 4})) out.insert(offset(e, b.origin));
    return out;
}

// everything except the per-block traversals
inline EdgeSet yagit_frame_segments(const ReductionTrace& tr)
{
    EdgeSet segs;
    for (size_t i = 0; i + 1 < tr.wrap.size(); ++i) segs.insert(Edge(tr.wrap[i], tr.wrap[i + 1]));
    segs.insert(Edge({0, 2}, {1, 2}));
    segs.insert(Edge({0, 3}, {1, 3}));
    const Placement& corner = tr.block({0, 0});
    Gadget g = builtin("yagit-corner");
    for (const Edge& e : g.traversals.at("corner")) segs.insert(offset(e, corner.origin));
    segs.insert(Edge(tr.turning_dots.at(0), tr.turning_dots.at(1)));
    return segs;
}

inline EdgeSet lift_yagit_segments(const MetacellCycle& c, const ReductionTrace& tr)
{
    auto used = used_dirs(tr.source, c);
    EdgeSet segs = yagit_frame_segments(tr);
    Dims sd = tr.source.dims();
    for (int i = 1; i < sd.size(); ++i) {
        const Placement& b = tr.blocks[i];
        auto part = block_pattern(b, pattern_for(tr.source.at(b.cell), used[i][0], used[i][1]));
        segs.insert(part.begin(), part.end());
    }
    return segs;
}

inline YagitSolution segments_to_solution(const YagitInstance& inst, const EdgeSet& segs)
{
    YagitSolution s{assemble_lines(inst, segs)};
    std::sort(s.lines.begin(), s.lines.end());
    return s;
}

} // namespace detail

inline Reduction reduce(const MetacellGridInstance& src, Target target, const ReduceOptions& opts = {})
{
    detail::require_valid(src);
    switch (target) {
    case Target::grandtour: return detail::reduce_cover(src, target, opts.block_n ? opts.block_n : 1);
    case Target::entryexit: return detail::reduce_cover(src, target, opts.block_n ? opts.block_n : 2);
    case Target::yagit: return detail::reduce_yagit(src);
    case Target::zahlen: return detail::reduce_zahlen(src, opts.closed);
    }
    throw ArgumentError("unknown target");
}

// the emitted instance, rebuilt from the trace (the construction is deterministic)
inline TargetInstance rebuild_instance(const ReductionTrace& tr)
{
    return reduce(tr.source, tr.target, {tr.block_n, tr.closed}).instance;
}

inline TargetSolution lift(const MetacellCycle& c, const ReductionTrace& tr)
{
    detail::require_cycle(tr.source, c);
    if (tr.trivial_unsat) throw InvariantError("source has a cycle but the target was emitted as unsatisfiable");
    switch (tr.target) {
    case Target::grandtour: return GrandTourSolution{detail::lift_cover(c, tr)};
    case Target::entryexit: return canonical_loop({loop_from_edges(detail::lift_cover(c, tr))});
    case Target::zahlen: return detail::lift_zahlen(c, tr);
    case Target::yagit: {
        auto inst = std::get<YagitInstance>(rebuild_instance(tr));
        return detail::segments_to_solution(inst, detail::lift_yagit_segments(c, tr));
    }
    }
    throw ArgumentError("unknown target");
}

// ---- yagit extraction with type-c replacements ----

struct ExtractResult {
    MetacellCycle cycle;
    int replacements = 0;
    std::vector<int> section_counts; // before any replacement, then after each one
};

namespace detail {

struct JunctionGraph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;

    int components() const
    {
        std::vector<int> parent(nodes);
        for (int i = 0; i < nodes; ++i) parent[i] = i;
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        int k = nodes;
        for (auto [a, b] : edges)
            if (find(a) != find(b)) parent[find(a)] = find(b), --k;
        return k;
    }
    // independent cycles: one per section loop still to be merged
    int circuit_rank() const { return static_cast<int>(edges.size()) - nodes + components(); }
};

struct YagitBlocks {
    std::vector<TraversalType> type; // per source cell; the corner is marked a
    std::vector<std::array<Coord, 4>> groups;
};

inline std::array<Coord, 4> group_of(const ReductionTrace& tr, Coord p)
{
    const Placement& b = tr.block(p);
    Coord q1 = step(p, apply_transform(b.t, Dir::right)), q2 = step(p, apply_transform(b.t, Dir::down));
    Coord q3{q1.row + q2.row - p.row, q1.col + q2.col - p.col};
    std::array<Coord, 4> g{p, q1, q2, q3};
    std::sort(g.begin(), g.end());
    return g; // top-left, top-right, bottom-left, bottom-right
}

inline YagitBlocks classify_blocks(const EdgeSet& segs, const ReductionTrace& tr)
{
    Dims sd = tr.source.dims();
    YagitBlocks out;
    out.type.assign(sd.size(), TraversalType::a);
    for (int i = 1; i < sd.size(); ++i) {
        const Placement& b = tr.blocks[i];
        auto k = classify_block_segments(block_segments(segs, b.origin), b.t);
        if (k == TraversalType::invalid)
            throw ExtractionError("block of source cell " + to_string(b.cell) + " matches no traversal type");
        out.type[i] = k;
    }
    std::set<std::array<Coord, 4>> seen;
    for (int i = 1; i < sd.size(); ++i) {
        if (out.type[i] != TraversalType::c) continue;
        auto g = group_of(tr, sd.at(i));
        for (Coord q : g)
            if (!sd.contains(q) || q == Coord{0, 0} || out.type[sd.index(q)] != TraversalType::c)
                throw ExtractionError("type-c block at source cell " + to_string(sd.at(i)) + " is not part of a four-block group");
        if (seen.insert(g).second) out.groups.push_back(g);
    }
    return out;
}

// exits each a/b block uses; corner uses right and down
inline std::vector<Dir> block_exits(const ReductionTrace& tr, int i, TraversalType k)
{
    if (i == 0) return {Dir::right, Dir::down};
    const Placement& b = tr.blocks[i];
    Dir f = apply_transform(b.t, Dir::left);
    if (k == TraversalType::a) return {f, apply_transform(b.t, Dir::right)};
    if (k == TraversalType::b) return {f, apply_transform(b.t, Dir::down)};
    return {f};
}

inline JunctionGraph junction_graph(const ReductionTrace& tr, const YagitBlocks& yb)
{
    Dims sd = tr.source.dims();
    JunctionGraph g;
    g.nodes = sd.size() + static_cast<int>(yb.groups.size());
    std::map<Edge, int> claims;
    for (int i = 0; i < sd.size(); ++i)
        for (Dir d : block_exits(tr, i, yb.type[i])) {
            Coord q = step(sd.at(i), d);
            if (!sd.contains(q)) throw ExtractionError("block of source cell " + to_string(sd.at(i)) + " leaves the grid");
            ++claims[Edge(sd.at(i), q)];
        }
    for (auto& [e, n] : claims) {
        if (n != 2)
            throw ExtractionError("blocks of source cells " + to_string(e.a) + " and " + to_string(e.b) +
                                  " disagree about their shared port");
        g.edges.push_back({sd.index(e.a), sd.index(e.b)});
    }
    for (size_t j = 0; j < yb.groups.size(); ++j)
        for (Coord p : yb.groups[j]) g.edges.push_back({sd.index(p), sd.size() + static_cast<int>(j)});
    return g;
}

} // namespace detail

// Replacement readout on a raw segment drawing. Works on drawings that are not valid
// puzzle solutions too (type-c groups always leave a closed strand behind).
inline ExtractResult extract_yagit_segments(EdgeSet segs, const ReductionTrace& tr)
{
    using namespace detail;
    if (tr.target != Target::yagit || tr.trivial_unsat) throw ArgumentError("not a yagit reduction with blocks");
    ExtractResult res;
    auto yb = classify_blocks(segs, tr);
    auto jg = junction_graph(tr, yb);
    if (jg.components() != 1) throw ExtractionError("block traversals do not form one connected loop");
    int N = jg.circuit_rank();
    res.section_counts.push_back(N);
    Dims sd = tr.source.dims();
    while (!yb.groups.empty()) {
        if (res.replacements >= sd.size()) throw InvariantError("replacement loop did not terminate");
        auto g = yb.groups.front();
        // horizontal pairs top-left/top-right and bottom-left/bottom-right, else vertical
        const std::array<std::array<int, 4>, 2> pairings{{{1, 0, 3, 2}, {2, 3, 0, 1}}};
        bool done = false;
        for (auto& partner : pairings) {
            EdgeSet next = segs;
            for (int k = 0; k < 4; ++k) {
                const Placement& b = tr.block(g[k]);
                for (const Edge& e : block_segments(segs, b.origin)) next.erase(offset(e, b.origin));
                Dir to = dir_between(g[k], g[partner[k]]);
                auto part = block_pattern(b, pattern_for(tr.source.at(g[k]), apply_transform(b.t, Dir::left), to));
                next.insert(part.begin(), part.end());
            }
            auto nb = classify_blocks(next, tr);
            auto ng = junction_graph(tr, nb);
            if (ng.components() != 1) continue;
            ++res.replacements;
            if (ng.circuit_rank() != N - res.replacements)
                throw InvariantError("section count " + std::to_string(ng.circuit_rank()) + " after replacement " +
                                     std::to_string(res.replacements) + ", expected " +
                                     std::to_string(N - res.replacements));
            res.section_counts.push_back(ng.circuit_rank());
            segs = std::move(next);
            yb = std::move(nb);
            done = true;
            break;
        }
        if (!done) throw InvariantError("no replacement keeps the group at " + to_string(g[0]) + " connected");
    }
    if (res.section_counts.back() != 1) throw InvariantError("more than one section left after replacements");
    for (int i = 0; i < sd.size(); ++i)
        for (Dir d : block_exits(tr, i, yb.type[i])) res.cycle.edges.insert(Edge(sd.at(i), step(sd.at(i), d)));
    // with only a/b blocks left the drawing must be a valid solution
    auto inst = std::get<YagitInstance>(rebuild_instance(tr));
    bool valid = false;
    try {
        valid = validate(inst, segments_to_solution(inst, segs)).ok();
    } catch (const GeometryError&) {
    }
    if (!valid) throw InvariantError("drawing after replacements is not a valid yagit solution");
    return res;
}

inline ExtractResult extract_yagit(const YagitSolution& sol, const ReductionTrace& tr)
{
    EdgeSet segs;
    for (auto& l : sol.lines)
        for (const Edge& e : line_segments(l)) segs.insert(e);
    return extract_yagit_segments(std::move(segs), tr);
}

inline ExtractResult extract_detailed(const TargetSolution& sol, const ReductionTrace& tr)
{
    if (tr.trivial_unsat) throw InputError("the target instance has no solutions");
    auto inst = rebuild_instance(tr);
    auto rep = validate_target(inst, sol);
    if (!rep.ok()) throw InputError("target solution: " + rep.violations.front());
    ExtractResult res;
    switch (tr.target) {
    case Target::grandtour: res.cycle = detail::read_cover(std::get<GrandTourSolution>(sol).loop, tr); break;
    case Target::entryexit: res.cycle = detail::read_cover(edges_of_loop(std::get<CellLoop>(sol).loop), tr); break;
    case Target::zahlen: res.cycle = detail::read_zahlen(std::get<CellPath>(sol), tr); break;
    case Target::yagit: res = extract_yagit(std::get<YagitSolution>(sol), tr); break;
    }
    auto crep = validate_cycle(tr.source, res.cycle);
    if (!crep.ok()) throw ExtractionError("extracted edges are not a valid source cycle: " + crep.violations.front());
    return res;
}

inline MetacellCycle extract(const TargetSolution& sol, const ReductionTrace& tr) { return extract_detailed(sol, tr).cycle; }

// Lift, then turn each listed four-block group (given by its top-left source cell) into
// type-c traversals. The result is a segment drawing; it always holds a closed strand,
// so it is never a valid solution, but the replacement readout runs on it.
inline EdgeSet lift_with_groups(const MetacellCycle& c, const ReductionTrace& tr, const std::vector<Coord>& groups)
{
    if (tr.target != Target::yagit) throw ArgumentError("type-c groups only exist in yagit reductions");
    detail::require_cycle(tr.source, c);
    Dims sd = tr.source.dims();
    EdgeSet segs = detail::lift_yagit_segments(c, tr);
    std::set<Coord> taken;
    for (Coord tl : groups) {
        if (!sd.contains(tl) || tl == Coord{0, 0}) throw ArgumentError("no group at " + to_string(tl));
        auto g = detail::group_of(tr, tl);
        if (g[0] != tl) throw ArgumentError("cell " + to_string(tl) + " is not the top-left of a type-c group");
        for (Coord p : g) {
            if (!sd.contains(p) || p == Coord{0, 0}) throw ArgumentError("group at " + to_string(tl) + " leaves the grid");
            if (detail::group_of(tr, p) != g) throw ArgumentError("cell " + to_string(p) + " does not face into the group");
            if (!taken.insert(p).second) throw ArgumentError("groups overlap at " + to_string(p));
            const Placement& b = tr.block(p);
            for (const Edge& e : block_segments(segs, b.origin)) segs.erase(offset(e, b.origin));
            auto part = detail::block_pattern(b, TraversalType::c);
            segs.insert(part.begin(), part.end());
        }
    }
    return segs;
}

// ---- JSON ----

inline json trace_json(const ReductionTrace& tr)
{
    json blocks = json::array();
    for (auto& b : tr.blocks) {
        json bj{{"cell", jsonio::coord_json(b.cell)},
                {"origin", jsonio::coord_json(b.origin)},
                {"gadget", b.gadget},
                {"transform", jsonio::transform_json(b.t)}};
        if (tr.target == Target::zahlen) bj["n"] = b.n;
        blocks.push_back(bj);
    }
    json j{{"target", target_name(tr.target)},
           {"source", metacell_json(tr.source)},
           {"block_size", tr.block_size},
           {"block_n", tr.block_n},
           {"closed", tr.closed},
           {"trivial_unsat", tr.trivial_unsat},
           {"blocks", blocks},
           {"merged", jsonio::edge_set_json(EdgeSet(tr.merged.begin(), tr.merged.end()))}};
    if (tr.target == Target::yagit) {
        j["turning_dots"] = jsonio::coord_list_json(tr.turning_dots);
        j["extra_sheep"] = tr.extra_sheep ? jsonio::coord_json(*tr.extra_sheep) : json(nullptr);
        j["wrap"] = jsonio::coord_list_json(tr.wrap);
    }
    if (tr.target == Target::zahlen) {
        json trail = json::array();
        for (auto& t : tr.trail)
            trail.push_back({{"cell", jsonio::coord_json(t.cell)}, {"label", "n" + std::to_string(t.label)}, {"value", t.value}});
        j["trail"] = trail;
    }
    return j;
}

inline ReductionTrace trace_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    ReductionTrace tr;
    std::string tname = as_string(field(j, "target", path), key_path(path, "target"));
    auto t = parse_target(tname);
    if (!t) throw InputError(key_path(path, "target") + ": unknown target '" + tname + "'");
    tr.target = *t;
    tr.source = metacell_from_json(field(j, "source", path), key_path(path, "source"));
    tr.block_size = int_field(j, "block_size", path, 1);
    tr.block_n = int_field(j, "block_n", path, 0);
    tr.closed = bool_field(j, "closed", path, false);
    tr.trivial_unsat = bool_field(j, "trivial_unsat", path, false);
    std::string bp = key_path(path, "blocks");
    const json& blocks = array_at(field(j, "blocks", path), bp);
    for (size_t i = 0; i < blocks.size(); ++i) {
        std::string ip = index_path(bp, i);
        Placement b;
        b.cell = as_coord(field(blocks[i], "cell", ip), key_path(ip, "cell"));
        b.origin = as_coord(field(blocks[i], "origin", ip), key_path(ip, "origin"));
        b.gadget = as_string(field(blocks[i], "gadget", ip), key_path(ip, "gadget"));
        b.t = as_transform(field(blocks[i], "transform", ip), key_path(ip, "transform"));
        if (blocks[i].contains("n")) b.n = int_field(blocks[i], "n", ip, 0);
        tr.blocks.push_back(b);
    }
    if (!tr.trivial_unsat && static_cast<int>(tr.blocks.size()) != tr.source.dims().size())
        throw InputError(bp + ": expected one block per source cell");
    auto merged = as_edge_set(field(j, "merged", path), key_path(path, "merged"));
    tr.merged.assign(merged.begin(), merged.end());
    if (tr.target == Target::yagit && !tr.trivial_unsat) {
        tr.turning_dots = as_coord_list(field(j, "turning_dots", path), key_path(path, "turning_dots"));
        tr.extra_sheep = as_coord(field(j, "extra_sheep", path), key_path(path, "extra_sheep"));
        tr.wrap = as_coord_list(field(j, "wrap", path), key_path(path, "wrap"));
    }
    if (tr.target == Target::zahlen && j.contains("trail")) {
        std::string tp = key_path(path, "trail");
        const json& trail = array_at(j["trail"], tp);
        for (size_t i = 0; i < trail.size(); ++i) {
            std::string ip = index_path(tp, i);
            TrailCell c;
            c.cell = as_coord(field(trail[i], "cell", ip), key_path(ip, "cell"));
            std::string label = as_string(field(trail[i], "label", ip), key_path(ip, "label"));
            if (label.size() < 2 || label[0] != 'n') throw InputError(key_path(ip, "label") + ": expected nK");
            c.label = std::stoi(label.substr(1));
            c.value = as_int(field(trail[i], "value", ip), key_path(ip, "value"));
            tr.trail.push_back(c);
        }
    }
    return tr;
}

inline json target_instance_json(const TargetInstance& inst)
{
    switch (inst.index()) {
    case 0: return grandtour_json(std::get<0>(inst));
    case 1: return entryexit_json(std::get<1>(inst));
    case 2: return yagit_json(std::get<2>(inst));
    default: return zahlen_json(std::get<3>(inst));
    }
}

inline TargetInstance target_instance_from_json(Target t, const json& j, const std::string& path = "$")
{
    switch (t) {
    case Target::grandtour: return grandtour_from_json(j, path);
    case Target::entryexit: return entryexit_from_json(j, path);
    case Target::yagit: return yagit_from_json(j, path);
    case Target::zahlen: return zahlen_from_json(j, path);
    }
    throw ArgumentError("unknown target");
}

inline json target_solution_json(const TargetSolution& s)
{
    return std::visit([](const auto& x) { return solution_json(x); }, s);
}

inline TargetSolution target_solution_from_json(Target t, const json& j, const std::string& path = "$")
{
    switch (t) {
    case Target::grandtour: return grandtour_solution_from_json(j, path);
    case Target::entryexit: return cell_loop_from_json(j, path);
    case Target::yagit: return yagit_solution_from_json(j, path);
    case Target::zahlen: return cell_path_from_json(j, path);
    }
    throw ArgumentError("unknown target");
}

} // namespace tmc
