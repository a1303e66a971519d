#pragma once

#include <optional>

#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/report.hpp"

namespace tmc {

enum class Animal { none, sheep, wolf };

inline char animal_char(Animal a) { return a == Animal::sheep ? 'S' : a == Animal::wolf ? 'W' : '.'; }

struct YagitInstance {
    int rows = 0, cols = 0;
    std::vector<Animal> animals; // row-major cells
    std::set<Coord> dots;        // lattice points

    Dims dims() const { return {rows, cols}; }
    Dims lattice() const { return {rows + 1, cols + 1}; }
    Animal animal(Coord p) const { return animals.at(dims().index(p)); }
    bool dot(Coord p) const { return dots.count(p) > 0; }
    bool on_border(Coord p) const { return p.row == 0 || p.col == 0 || p.row == rows || p.col == cols; }
    bool corner(Coord p) const { return (p.row == 0 || p.row == rows) && (p.col == 0 || p.col == cols); }
    bool operator==(const YagitInstance&) const = default;
};

struct PartitionLine {
    std::vector<Coord> points;
    bool operator==(const PartitionLine&) const = default;
    auto operator<=>(const PartitionLine& o) const { return points <=> o.points; }
};

struct YagitSolution {
    std::vector<PartitionLine> lines;
    bool operator==(const YagitSolution&) const = default;
};

enum class TraversalType { a, b, c, invalid };

inline const char* traversal_name(TraversalType t)
{
    static const char* names[] = {"a", "b", "c", "invalid"};
    return names[static_cast<int>(t)];
}

inline EdgeSet line_segments(const PartitionLine& l)
{
    EdgeSet out;
    for (size_t i = 0; i + 1 < l.points.size(); ++i) out.insert(Edge(l.points[i], l.points[i + 1]));
    return out;
}

// first geometry problem of one line, if any
inline std::optional<std::string> line_problem(const YagitInstance& inst, const PartitionLine& l, size_t idx)
{
    std::string name = "line " + std::to_string(idx);
    const auto& v = l.points;
    if (v.size() < 2) return name + " needs at least two points";
    Dims lat = inst.lattice();
    for (Coord p : v)
        if (!lat.contains(p)) return name + " point " + to_string(p) + " outside the lattice";
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!adjacent(v[i], v[i + 1])) return name + " jumps from " + to_string(v[i]) + " to " + to_string(v[i + 1]);
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (dir_between(v[i - 1], v[i]) != dir_between(v[i], v[i + 1]) && !inst.dot(v[i]))
            return name + " makes an illegal turn at " + to_string(v[i]) + " (no dot)";
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (inst.on_border(v[i])) return name + " runs along the border at " + to_string(v[i]);
    for (Coord p : {v.front(), v.back()}) {
        if (!inst.on_border(p)) return name + " endpoint " + to_string(p) + " not on the border";
        if (inst.corner(p)) return name + " endpoint " + to_string(p) + " is a grid corner";
    }
    std::set<Edge> segs;
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!segs.insert(Edge(v[i], v[i + 1])).second)
            return name + " repeats segment " + to_string(Edge(v[i], v[i + 1]));
    std::set<Coord> dots_seen;
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (inst.dot(v[i]) && !dots_seen.insert(v[i]).second) return name + " crosses itself at dot " + to_string(v[i]);
    return std::nullopt;
}

// the lattice segment lying between two adjacent cells
inline Edge separating_segment(Coord a, Coord b)
{
    if (a > b) std::swap(a, b);
    if (a.row == b.row) return Edge({a.row, b.col}, {a.row + 1, b.col});
    return Edge({b.row, a.col}, {b.row, a.col + 1});
}

struct Regions {
    std::vector<int> region_of; // row-major cells
    int count = 0;
};

inline Regions regions_from_cuts(Dims d, const EdgeSet& cuts)
{
    Regions out;
    out.region_of.assign(d.size(), -1);
    for (int i = 0; i < d.size(); ++i) {
        if (out.region_of[i] >= 0) continue;
        std::vector<int> st{i};
        out.region_of[i] = out.count;
        while (!st.empty()) {
            Coord p = d.at(st.back());
            st.pop_back();
            for (Coord q : neighbors(p, d)) {
                int j = d.index(q);
                if (out.region_of[j] < 0 && !cuts.count(separating_segment(p, q))) {
                    out.region_of[j] = out.count;
                    st.push_back(j);
                }
            }
        }
        ++out.count;
    }
    return out;
}

inline Regions compute_regions(const YagitInstance& inst, const std::vector<PartitionLine>& lines)
{
    EdgeSet cuts;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (auto bad = line_problem(inst, lines[i], i)) throw GeometryError(*bad);
        for (const Edge& e : line_segments(lines[i])) cuts.insert(e);
    }
    return regions_from_cuts(inst.dims(), cuts);
}

// per region: has sheep, has wolf
inline std::vector<std::pair<bool, bool>> region_animals(const YagitInstance& inst, const Regions& reg)
{
    std::vector<std::pair<bool, bool>> out(reg.count, {false, false});
    for (int i = 0; i < static_cast<int>(inst.animals.size()); ++i) {
        if (inst.animals[i] == Animal::sheep) out[reg.region_of[i]].first = true;
        if (inst.animals[i] == Animal::wolf) out[reg.region_of[i]].second = true;
    }
    return out;
}

inline Report check_instance(const YagitInstance& inst)
{
    Report rep;
    if (inst.rows < 1 || inst.cols < 1 || static_cast<int>(inst.animals.size()) != inst.dims().size()) {
        rep.add("animal grid has wrong size");
        return rep;
    }
    for (Coord p : inst.dots)
        if (p.row <= 0 || p.col <= 0 || p.row >= inst.rows || p.col >= inst.cols)
            rep.add("dot " + to_string(p) + " is not strictly interior");
    return rep;
}

inline Report validate(const YagitInstance& inst, const YagitSolution& sol)
{
    Report rep = check_instance(inst);
    if (!rep.ok()) return rep;
    const auto& lines = sol.lines;
    for (size_t i = 0; i < lines.size(); ++i)
        if (auto bad = line_problem(inst, lines[i], i)) rep.add(*bad);
    if (!rep.ok()) return rep;
    std::map<Coord, size_t> ends;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto& v = lines[i].points;
        if (v.front() == v.back()) rep.add("line " + std::to_string(i) + " starts and ends at the same point");
        for (Coord p : {v.front(), v.back()}) {
            auto [it, fresh] = ends.emplace(p, i);
            if (!fresh && it->second != i)
                rep.add("lines " + std::to_string(it->second) + " and " + std::to_string(i) + " share endpoint " + to_string(p));
        }
    }
    std::map<Edge, size_t> owner;
    for (size_t i = 0; i < lines.size(); ++i)
        for (const Edge& e : line_segments(lines[i])) {
            auto [it, fresh] = owner.emplace(e, i);
            if (!fresh)
                rep.add("lines " + std::to_string(it->second) + " and " + std::to_string(i) + " share segment " + to_string(e));
        }
    std::map<Coord, size_t> dot_owner;
    for (size_t i = 0; i < lines.size(); ++i) {
        std::set<Coord> mine;
        for (Coord p : lines[i].points)
            if (inst.dot(p)) mine.insert(p);
        for (Coord p : mine) {
            auto [it, fresh] = dot_owner.emplace(p, i);
            if (!fresh)
                rep.add("lines " + std::to_string(it->second) + " and " + std::to_string(i) + " meet at dot " + to_string(p));
        }
    }
    if (!rep.ok()) return rep;
    auto reg = compute_regions(inst, lines);
    auto an = region_animals(inst, reg);
    for (int r = 0; r < reg.count; ++r) {
        Coord first{};
        for (int i = 0; i < inst.dims().size(); ++i)
            if (reg.region_of[i] == r) {
                first = inst.dims().at(i);
                break;
            }
        if (!an[r].first && !an[r].second) rep.add("region containing " + to_string(first) + " has no animal");
        if (an[r].first && an[r].second) rep.add("region containing " + to_string(first) + " holds both sheep and wolves");
    }
    return rep;
}

// Split a set of unit segments into polylines: walk from border endpoints,
// going straight through points where two strands cross.
inline std::vector<PartitionLine> assemble_lines(const YagitInstance& inst, const EdgeSet& segs)
{
    std::map<Coord, std::vector<Coord>> adj;
    for (const Edge& e : segs) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& [p, ns] : adj)
        if (ns.size() != 2 && ns.size() != 4 && !(ns.size() == 1 && inst.on_border(p)))
            throw GeometryError("segments meet " + std::to_string(ns.size()) + " times at " + to_string(p));
    std::set<Edge> used;
    std::vector<PartitionLine> out;
    for (auto& [start, ns] : adj) {
        if (ns.size() != 1 || used.count(Edge(start, ns[0]))) continue;
        PartitionLine l{{start}};
        Coord prev = start, cur = ns[0];
        used.insert(Edge(start, cur));
        while (true) {
            l.points.push_back(cur);
            auto& cn = adj[cur];
            if (cn.size() == 1) break;
            Coord next;
            if (cn.size() == 2) next = cn[0] == prev ? cn[1] : cn[0];
            else next = step(cur, dir_between(prev, cur));
            if (!used.insert(Edge(cur, next)).second) throw GeometryError("segment reused at " + to_string(cur));
            prev = cur;
            cur = next;
        }
        out.push_back(std::move(l));
    }
    if (used.size() != segs.size()) throw GeometryError("segments form a closed loop away from the border");
    return out;
}

// ---- solver ----

inline PartitionLine canonical_line(PartitionLine l)
{
    PartitionLine r{{l.points.rbegin(), l.points.rend()}};
    return std::min(l, r);
}

// every legal line: start at a border point, head inward, turn only at dots, stop at the border
inline std::vector<PartitionLine> candidate_lines(const YagitInstance& inst)
{
    std::set<PartitionLine> found;
    Dims lat = inst.lattice();
    std::vector<Coord> path;
    std::set<Edge> segs;
    std::set<Coord> dots_used;
    std::function<void(Dir)> walk = [&](Dir d) {
        Coord p = path.back(), q = step(p, d);
        if (!lat.contains(q) || segs.count(Edge(p, q))) return;
        path.push_back(q);
        segs.insert(Edge(p, q));
        if (inst.on_border(q)) {
            if (!inst.corner(q) && q != path.front()) found.insert(canonical_line({path}));
        } else if (inst.dot(q)) {
            if (dots_used.insert(q).second) {
                walk(d);
                walk(turn_cw(d));
                walk(opposite(turn_cw(d)));
                dots_used.erase(q);
            }
        } else {
            walk(d);
        }
        segs.erase(Edge(p, q));
        path.pop_back();
    };
    for (int r = 0; r < lat.rows; ++r)
        for (int c = 0; c < lat.cols; ++c) {
            Coord p{r, c};
            if (!inst.on_border(p) || inst.corner(p)) continue;
            Dir in = r == 0 ? Dir::down : r == inst.rows ? Dir::up : c == 0 ? Dir::right : Dir::left;
            path = {p};
            walk(in);
        }
    return {found.begin(), found.end()};
}

struct YagitLimits {
    int max_lines = 8;
    std::uint64_t max_nodes = 2000000;
};

enum class YagitStatus { solved, unsat, limit_exceeded };

struct YagitResult {
    YagitStatus status = YagitStatus::unsat;
    std::optional<YagitSolution> solution;
};

inline YagitResult solve(const YagitInstance& inst, const YagitLimits& limits = {})
{
    YagitResult res;
    if (!check_instance(inst).ok()) return res;
    Dims d = inst.dims();
    auto cands = candidate_lines(inst);
    size_t n = cands.size();
    std::vector<EdgeSet> segs(n);
    std::vector<std::set<Coord>> ends(n), dots(n);
    for (size_t i = 0; i < n; ++i) {
        segs[i] = line_segments(cands[i]);
        ends[i] = {cands[i].points.front(), cands[i].points.back()};
        for (Coord p : cands[i].points)
            if (inst.dot(p)) dots[i].insert(p);
    }
    auto meets = [](const auto& x, const auto& y) {
        for (auto& e : x)
            if (y.count(e)) return true;
        return false;
    };
    std::vector<std::vector<bool>> clash(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            clash[i][j] = clash[j][i] = meets(segs[i], segs[j]) || meets(ends[i], ends[j]) || meets(dots[i], dots[j]);

    std::vector<size_t> chosen;
    EdgeSet cuts;
    std::uint64_t nodes = 0;
    bool cut_short = false, capped = false, found = false;
    std::function<void(size_t)> go = [&](size_t from) {
        if (found || cut_short) return;
        if (++nodes > limits.max_nodes) {
            cut_short = true;
            return;
        }
        auto reg = regions_from_cuts(d, cuts);
        auto an = region_animals(inst, reg);
        bool all_ok = true;
        std::vector<bool> mixed(reg.count, false);
        for (int r = 0; r < reg.count; ++r) {
            if (!an[r].first && !an[r].second) return; // more lines only split further
            if (an[r].first && an[r].second) mixed[r] = true, all_ok = false;
        }
        if (all_ok) {
            found = true;
            YagitSolution s;
            for (size_t i : chosen) s.lines.push_back(cands[i]);
            res.solution = s;
            return;
        }
        if (static_cast<int>(chosen.size()) == limits.max_lines) {
            capped = true;
            return;
        }
        std::vector<size_t> usable;
        for (size_t k = from; k < n; ++k) {
            bool ok = true;
            for (size_t i : chosen) ok = ok && !clash[i][k];
            if (ok) usable.push_back(k);
        }
        // every mixed region must be split by some line still available
        for (int r = 0; r < reg.count; ++r) {
            if (!mixed[r]) continue;
            bool splittable = false;
            for (size_t k : usable) {
                for (const Edge& e : segs[k]) {
                    Coord x = e.a.row == e.b.row ? Coord{e.a.row - 1, std::min(e.a.col, e.b.col)}
                                                 : Coord{std::min(e.a.row, e.b.row), e.a.col - 1};
                    Coord y = e.a.row == e.b.row ? Coord{e.a.row, x.col} : Coord{x.row, e.a.col};
                    if (d.contains(x) && d.contains(y) && reg.region_of[d.index(x)] == r && reg.region_of[d.index(y)] == r) {
                        splittable = true;
                        break;
                    }
                }
                if (splittable) break;
            }
            if (!splittable) return;
        }
        for (size_t k : usable) {
            chosen.push_back(k);
            for (const Edge& e : segs[k]) cuts.insert(e);
            go(k + 1);
            for (const Edge& e : segs[k]) cuts.erase(e);
            chosen.pop_back();
            if (found || cut_short) return;
        }
    };
    go(0);
    if (found) res.status = YagitStatus::solved;
    else if (cut_short || capped) res.status = YagitStatus::limit_exceeded;
    return res;
}

inline const char* status_name(YagitStatus s)
{
    return s == YagitStatus::solved ? "solved" : s == YagitStatus::unsat ? "unsat" : "limit-exceeded";
}

// ---- block traversals ----

// canonical 3x3 block patterns with the forced exit on the left; lattice coords 0..3
inline const EdgeSet& traversal_pattern(TraversalType t)
{
    auto h = [](int r, int c) { return Edge({r, c}, {r, c + 1}); };
    auto v = [](int r, int c) { return Edge({r, c}, {r + 1, c}); };
    static const EdgeSet a{h(1, 0), h(1, 1), h(1, 2), h(2, 0), h(2, 1), h(2, 2)};
    static const EdgeSet b{h(1, 0), h(1, 1), v(1, 2), v(2, 2), h(2, 0), v(2, 1)};
    static const EdgeSet c{h(1, 0), h(1, 1), v(1, 2), v(2, 2), h(2, 0), h(2, 1), h(2, 2)};
    static const EdgeSet none;
    switch (t) {
    case TraversalType::a: return a;
    case TraversalType::b: return b;
    case TraversalType::c: return c;
    default: return none;
    }
}

// unit segments whose midpoint lies strictly inside the 3x3 block at origin
inline EdgeSet block_segments(const EdgeSet& segs, Coord origin, int size = 3)
{
    EdgeSet out;
    for (const Edge& e : segs) {
        int mr = e.a.row + e.b.row, mc = e.a.col + e.b.col; // doubled midpoint
        if (mr > 2 * origin.row && mr < 2 * (origin.row + size) && mc > 2 * origin.col && mc < 2 * (origin.col + size))
            out.insert(offset(e, {-origin.row, -origin.col}));
    }
    return out;
}

inline TraversalType classify_block_segments(const EdgeSet& local, const D4Transform& t)
{
    EdgeSet canon = apply_transform(inverse(t), local, {4, 4});
    for (TraversalType k : {TraversalType::a, TraversalType::b, TraversalType::c})
        if (canon == traversal_pattern(k)) return k;
    return TraversalType::invalid;
}

inline TraversalType classify_block_traversal(const YagitInstance&, const std::vector<PartitionLine>& lines, Coord origin,
                                              const std::optional<D4Transform>& t)
{
    if (!t) throw ArgumentError("block at " + to_string(origin) + " has no orientation metadata");
    EdgeSet all;
    for (auto& l : lines)
        for (const Edge& e : line_segments(l)) all.insert(e);
    return classify_block_segments(block_segments(all, origin), *t);
}

// ---- JSON ----

inline json yagit_json(const YagitInstance& inst)
{
    json rows = json::array();
    for (int r = 0; r < inst.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < inst.cols; ++c) row.push_back(std::string(1, animal_char(inst.animal({r, c}))));
        rows.push_back(row);
    }
    std::vector<Coord> dots(inst.dots.begin(), inst.dots.end());
    return json{{"rows", inst.rows}, {"cols", inst.cols}, {"animals", rows}, {"dots", jsonio::coord_list_json(dots)}};
}

// blocks loaded on their own may carry dots on their edge; full instances may not
inline YagitInstance yagit_from_json(const json& j, const std::string& path = "$", bool interior_dots = true)
{
    using namespace jsonio;
    YagitInstance inst;
    inst.rows = int_field(j, "rows", path, 1);
    inst.cols = int_field(j, "cols", path, 1);
    std::string ap = key_path(path, "animals");
    const json& m = array_at(field(j, "animals", path), ap);
    if (static_cast<int>(m.size()) != inst.rows) throw InputError(ap + ": expected " + std::to_string(inst.rows) + " rows");
    for (int r = 0; r < inst.rows; ++r) {
        const json& row = array_at(m[r], index_path(ap, r));
        if (static_cast<int>(row.size()) != inst.cols)
            throw InputError(index_path(ap, r) + ": expected " + std::to_string(inst.cols) + " entries");
        for (int c = 0; c < inst.cols; ++c) {
            std::string cp = index_path(index_path(ap, r), c);
            std::string s = as_string(row[c], cp);
            if (s == ".") inst.animals.push_back(Animal::none);
            else if (s == "S") inst.animals.push_back(Animal::sheep);
            else if (s == "W") inst.animals.push_back(Animal::wolf);
            else throw InputError(cp + ": expected \".\", \"S\" or \"W\"");
        }
    }
    std::string dp = key_path(path, "dots");
    auto dots = as_coord_list(field(j, "dots", path), dp);
    for (size_t i = 0; i < dots.size(); ++i) {
        Coord p = dots[i];
        bool inside = interior_dots ? p.row > 0 && p.col > 0 && p.row < inst.rows && p.col < inst.cols
                                    : p.row >= 0 && p.col >= 0 && p.row <= inst.rows && p.col <= inst.cols;
        if (!inside)
            throw InputError(index_path(dp, i) + ": dots must be strictly interior lattice points");
        inst.dots.insert(p);
    }
    return inst;
}

inline json solution_json(const YagitSolution& s)
{
    json lines = json::array();
    for (auto& l : s.lines) lines.push_back(jsonio::coord_list_json(l.points));
    return json{{"lines", lines}};
}

inline YagitSolution yagit_solution_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    std::string lp = key_path(path, "lines");
    const json& arr = array_at(field(j, "lines", path), lp);
    YagitSolution s;
    for (size_t i = 0; i < arr.size(); ++i) s.lines.push_back({as_coord_list(arr[i], index_path(lp, i))});
    return s;
}

} // namespace tmc
