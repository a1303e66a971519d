#pragma once

#include <optional>

#include "tmc/cycle_search.hpp"
#include "tmc/entryexit.hpp"
#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/yagit.hpp"
#include "tmc/fixture_data.hpp"

namespace tmc {

enum class GadgetKind { grandtour, entryexit, yagit, zahlen };

inline const char* kind_name(GadgetKind k)
{
    static const char* names[] = {"grandtour", "entryexit", "yagit", "zahlen"};
    return names[static_cast<int>(k)];
}

// One block of a reduction. Coordinates are vertices for grandtour, cells otherwise;
// yagit dots and traversal patterns live on the (rows+1)x(cols+1) lattice.
struct Gadget {
    std::string name;
    GadgetKind kind = GadgetKind::grandtour;
    int rows = 0, cols = 0;
    EdgeSet forced;                        // grandtour
    std::vector<int> region_of;            // entryexit
    std::vector<Animal> animals;           // yagit
    std::set<Coord> dots;                  // yagit
    std::vector<std::string> value_exprs;  // zahlen: integer literal, "3n+k" or "nK"
    std::map<Dir, Coord> exits;
    std::optional<Dir> forced_port;
    std::map<std::string, EdgeSet> traversals; // yagit patterns, grandtour witnesses
    int block_n = 0;                       // zahlen block index
    D4Transform orientation{};

    Dims dims() const { return {rows, cols}; }
    bool corner() const { return name.find("corner") != std::string::npos; }
    bool operator==(const Gadget&) const = default;
};

// value of a zahlen cell expression; trail(k) supplies the value of "nk"
template <class Trail>
long long zahlen_value(const std::string& expr, int n, Trail&& trail)
{
    if (expr.size() > 3 && expr.compare(0, 3, "3n+") == 0) return 3LL * n + std::stoll(expr.substr(3));
    if (expr.size() > 1 && expr[0] == 'n') return trail(std::stoi(expr.substr(1)));
    return std::stoll(expr);
}

inline std::vector<long long> zahlen_values(const Gadget& g)
{
    std::vector<long long> out;
    for (auto& e : g.value_exprs)
        out.push_back(zahlen_value(e, g.block_n, [&](int k) -> long long {
            throw ArgumentError("value n" + std::to_string(k) + " of " + g.name + " needs a trail assignment");
        }));
    return out;
}

inline std::string pair_label(Dir a, Dir b)
{
    std::string x = dir_name(a), y = dir_name(b);
    if (y < x) std::swap(x, y);
    return x + "+" + y;
}

// ---- fixtures ----

inline Gadget gadget_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    Gadget g;
    g.name = as_string(field(j, "name", path), key_path(path, "name"));
    std::string kind = as_string(field(j, "kind", path), key_path(path, "kind"));
    if (kind == "grandtour") g.kind = GadgetKind::grandtour;
    else if (kind == "entryexit") g.kind = GadgetKind::entryexit;
    else if (kind == "yagit") g.kind = GadgetKind::yagit;
    else if (kind == "zahlen") g.kind = GadgetKind::zahlen;
    else throw InputError(key_path(path, "kind") + ": unknown gadget kind '" + kind + "'");
    if (g.kind == GadgetKind::grandtour) {
        g.rows = int_field(j, "vrows", path, 1);
        g.cols = int_field(j, "vcols", path, 1);
        g.forced = as_edge_set(field(j, "forced", path), key_path(path, "forced"));
    } else {
        g.rows = int_field(j, "rows", path, 1);
        g.cols = int_field(j, "cols", path, 1);
    }
    if (g.kind == GadgetKind::entryexit) {
        json inst = j;
        g.region_of = entryexit_from_json(inst, path).region_of;
    }
    if (g.kind == GadgetKind::yagit) {
        auto y = yagit_from_json(j, path, false);
        g.animals = y.animals;
        g.dots = y.dots;
    }
    if (g.kind == GadgetKind::zahlen) {
        std::string vp = key_path(path, "values");
        const json& m = array_at(field(j, "values", path), vp);
        if (static_cast<int>(m.size()) != g.rows) throw InputError(vp + ": wrong row count");
        for (int r = 0; r < g.rows; ++r) {
            const json& row = array_at(m[r], index_path(vp, r));
            if (static_cast<int>(row.size()) != g.cols) throw InputError(index_path(vp, r) + ": wrong column count");
            for (int c = 0; c < g.cols; ++c) {
                const json& v = row[c];
                if (v.is_number_integer()) g.value_exprs.push_back(std::to_string(v.get<long long>()));
                else g.value_exprs.push_back(as_string(v, index_path(index_path(vp, r), c)));
            }
        }
    }
    std::string ep = key_path(path, "exits");
    const json& ex = field(j, "exits", path);
    if (!ex.is_object()) throw InputError(ep + ": expected an object");
    for (auto& [k, v] : ex.items()) {
        Dir d;
        if (!parse_dir(k, d)) throw InputError(key_path(ep, k) + ": unknown direction");
        g.exits[d] = as_coord(v, key_path(ep, k));
    }
    if (g.exits.size() != 3) throw InputError(ep + ": a T-metacell has exactly three exits");
    if (auto it = j.find("forced_port"); it != j.end() && !it->is_null()) {
        Dir d;
        if (!parse_dir(as_string(*it, key_path(path, "forced_port")), d))
            throw InputError(key_path(path, "forced_port") + ": unknown direction");
        if (!g.exits.count(d)) throw InputError(key_path(path, "forced_port") + ": not one of the exits");
        g.forced_port = d;
    }
    if (g.kind == GadgetKind::zahlen && j.contains("n")) g.block_n = int_field(j, "n", path, 0);
    if (auto it = j.find("orientation"); it != j.end()) {
        auto t = parse_transform(as_string(*it, key_path(path, "orientation")));
        if (!t) throw InputError(key_path(path, "orientation") + ": unknown transform");
        g.orientation = *t;
    }
    for (const char* key : {"traversals", "witnesses"})
        if (auto it = j.find(key); it != j.end())
            for (auto& [k, v] : it->items()) g.traversals[k] = as_edge_set(v, key_path(key_path(path, key), k));
    return g;
}

inline json gadget_json(const Gadget& g)
{
    json j{{"name", g.name}, {"kind", kind_name(g.kind)}};
    if (g.kind == GadgetKind::grandtour) {
        j["vrows"] = g.rows;
        j["vcols"] = g.cols;
        j["forced"] = jsonio::edge_set_json(g.forced);
    } else {
        j["rows"] = g.rows;
        j["cols"] = g.cols;
    }
    if (g.kind == GadgetKind::entryexit) j["region_of"] = entryexit_json({g.rows, g.cols, g.region_of})["region_of"];
    if (g.kind == GadgetKind::yagit) {
        YagitInstance y{g.rows, g.cols, g.animals, g.dots};
        auto yj = yagit_json(y);
        j["animals"] = yj["animals"];
        j["dots"] = yj["dots"];
    }
    if (g.kind == GadgetKind::zahlen) {
        json rows = json::array();
        for (int r = 0; r < g.rows; ++r) {
            json row = json::array();
            for (int c = 0; c < g.cols; ++c) {
                const std::string& e = g.value_exprs[r * g.cols + c];
                bool lit = !e.empty() && std::all_of(e.begin(), e.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
                if (lit) row.push_back(std::stoll(e));
                else row.push_back(e);
            }
            rows.push_back(row);
        }
        j["values"] = rows;
        j["n"] = g.block_n;
    }
    json ex = json::object();
    for (auto& [d, p] : g.exits) ex[dir_name(d)] = json::array({p.row, p.col});
    j["exits"] = ex;
    j["forced_port"] = g.forced_port ? json(dir_name(*g.forced_port)) : json(nullptr);
    if (g.orientation != D4Transform{}) j["orientation"] = to_string(g.orientation);
    if (!g.traversals.empty()) {
        json tj = json::object();
        for (auto& [k, es] : g.traversals) tj[k] = jsonio::edge_set_json(es);
        j[g.kind == GadgetKind::grandtour ? "witnesses" : "traversals"] = tj;
    }
    return j;
}

inline std::vector<std::string> builtin_names()
{
    std::vector<std::string> out;
    for (auto& [k, v] : fixture_data::kGadgets) out.emplace_back(k);
    return out;
}

// the family member of side 4n+1
inline Gadget grandtour_family(int n)
{
    if (n < 1) throw ArgumentError("family index must be at least 1");
    int m = 4 * n, mid = 2 * n;
    Gadget g;
    g.name = n == 1 ? "gt5" : "gt" + std::to_string(m + 1);
    g.kind = GadgetKind::grandtour;
    g.rows = g.cols = m + 1;
    auto h = [](int r, int c) { return Edge({r, c}, {r, c + 1}); };
    auto v = [](int r, int c) { return Edge({r, c}, {r + 1, c}); };
    for (int c = 0; c < m; ++c) g.forced.insert(h(0, c));
    for (int c = 0; c < m; ++c)
        if (c != mid) g.forced.insert(h(m, c));
    for (int r = 0; r < m; ++r) {
        if (r < mid || r > mid) g.forced.insert(v(r, 0));
        if (r < mid - 1 || r >= mid) g.forced.insert(v(r, m));
    }
    g.forced.insert(h(mid - 1, m - 1));
    g.forced.insert(h(mid + 1, 0));
    g.forced.insert(v(m - 1, mid + 1));
    g.exits = {{Dir::left, {mid, 0}}, {Dir::right, {mid, m}}, {Dir::down, {m, mid}}};
    return g;
}

// Entry-Exit block with the same shape as a grandtour block: each forced path becomes a
// width-one corridor region, every other cell is its own region. Side 4n+1 keeps the
// ports on the majority colour, which a 7x7 block cannot do.
inline Gadget entryexit_from_grandtour(const Gadget& gt)
{
    Gadget g;
    g.name = "ee" + std::to_string(gt.rows);
    g.kind = GadgetKind::entryexit;
    g.rows = gt.rows;
    g.cols = gt.cols;
    g.exits = gt.exits;
    g.forced_port = gt.forced_port;
    Dims d = g.dims();
    std::map<Coord, std::vector<Coord>> adj;
    for (auto& e : gt.forced) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    g.region_of.assign(d.size(), -1);
    int k = 0;
    for (int i = 0; i < d.size(); ++i) {
        if (g.region_of[i] >= 0) continue;
        std::vector<Coord> st{d.at(i)};
        g.region_of[i] = k;
        while (!st.empty()) {
            Coord p = st.back();
            st.pop_back();
            for (Coord q : adj[p])
                if (g.region_of[d.index(q)] < 0) {
                    g.region_of[d.index(q)] = k;
                    st.push_back(q);
                }
        }
        ++k;
    }
    return g;
}

// named gadget from the atlas; n is the block index for numbered blocks
inline Gadget builtin(const std::string& name, int n = 0)
{
    for (auto& [k, text] : fixture_data::kGadgets)
        if (k == name) {
            Gadget g = gadget_from_json(json::parse(text));
            if (g.kind == GadgetKind::zahlen) {
                if (n < 0) throw ArgumentError("block index must be non-negative");
                g.block_n = n;
            }
            return g;
        }
    // gtS for any side S = 4n+1 comes from the family rule
    if (name.size() > 2 && name.compare(0, 2, "gt") == 0 &&
        std::all_of(name.begin() + 2, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int s = std::stoi(name.substr(2));
        if (s >= 5 && s % 4 == 1) return grandtour_family((s - 1) / 4);
    }
    if (name.size() > 2 && name.compare(0, 2, "ee") == 0 &&
        std::all_of(name.begin() + 2, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int s = std::stoi(name.substr(2));
        if (s >= 5 && s % 4 == 1) return entryexit_from_grandtour(grandtour_family((s - 1) / 4));
    }
    throw LookupError("unknown gadget '" + name + "'");
}

// ---- transforms ----

inline Gadget transform_gadget(const Gadget& g, const D4Transform& t)
{
    Gadget out = g;
    Dims d = g.dims();
    Dims td = transformed_dims(t, d);
    out.rows = td.rows;
    out.cols = td.cols;
    out.orientation = compose(t, g.orientation);
    auto move_cells = [&](const auto& src, auto& dst) {
        for (int i = 0; i < d.size(); ++i) dst[td.index(apply_transform(t, d.at(i), d))] = src[i];
    };
    if (!g.region_of.empty()) move_cells(g.region_of, out.region_of);
    if (!g.animals.empty()) move_cells(g.animals, out.animals);
    if (!g.value_exprs.empty()) move_cells(g.value_exprs, out.value_exprs);
    out.forced = apply_transform(t, g.forced, d);
    Dims lat{d.rows + 1, d.cols + 1};
    out.dots.clear();
    for (Coord p : g.dots) out.dots.insert(apply_transform(t, p, lat));
    for (auto& [k, es] : g.traversals)
        out.traversals[k] = apply_transform(t, es, g.kind == GadgetKind::grandtour ? d : lat);
    out.exits.clear();
    for (auto& [dir, p] : g.exits) out.exits[apply_transform(t, dir)] = apply_transform(t, p, d);
    if (g.forced_port) out.forced_port = apply_transform(t, *g.forced_port);
    return out;
}

// ---- verification ----

struct PairResult {
    Dir a, b;
    bool feasible = false;
    long long count = 0; // completions, only meaningful when counted
    bool counted = false;
};

struct GadgetReport {
    std::string name;
    GadgetKind kind = GadgetKind::grandtour;
    std::vector<PairResult> pairs;
    std::optional<bool> forced_ok;
    std::optional<Dir> forced_port;
    std::vector<std::string> spurious;
    std::string mode = "exhaustive";
    std::optional<std::string> downgrade;
    long long type_c = 0; // yagit three-port traversals
    std::vector<std::string> notes;

    bool certified() const
    {
        if (!spurious.empty()) return false;
        for (auto& p : pairs) {
            bool want = !forced_port || p.a == *forced_port || p.b == *forced_port;
            if (p.feasible != want) return false;
        }
        return !forced_port || forced_ok.value_or(false);
    }
};

enum class VerifyMode { exhaustive, feasibility, automatic };

struct VerifyOptions {
    VerifyMode mode = VerifyMode::automatic;
    std::uint64_t node_budget = 3000000;
};

inline json report_json(const GadgetReport& r)
{
    json pairs = json::array();
    for (auto& p : r.pairs) {
        json pj{{"pair", pair_label(p.a, p.b)}, {"feasible", p.feasible}};
        if (p.counted) pj["completions"] = p.count;
        pairs.push_back(pj);
    }
    json j{{"gadget", r.name}, {"kind", kind_name(r.kind)}, {"mode", r.mode}, {"pairs", pairs},
           {"spurious", r.spurious}, {"certified", r.certified()}};
    j["forced_port"] = r.forced_port ? json(dir_name(*r.forced_port)) : json(nullptr);
    j["forced_ok"] = r.forced_ok ? json(*r.forced_ok) : json(nullptr);
    if (r.downgrade) j["downgrade"] = *r.downgrade;
    if (r.kind == GadgetKind::yagit) j["type_c_traversals"] = r.type_c;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

namespace detail {

struct Crossing {
    Coord at;
    Dir dir;
    bool port;
    auto operator<=>(const Crossing&) const = default;
};

inline std::vector<Crossing> border_crossings(const Gadget& g)
{
    std::vector<Crossing> out;
    Dims d = g.dims();
    for (int i = 0; i < d.size(); ++i) {
        Coord p = d.at(i);
        for (Dir dir : kDirs)
            if (!d.contains(step(p, dir))) {
                auto it = g.exits.find(dir);
                out.push_back({p, dir, it != g.exits.end() && it->second == p});
            }
    }
    return out;
}

inline std::string crossing_name(const Crossing& c) { return to_string(c.at) + " " + dir_name(c.dir); }

inline void init_pairs(const Gadget& g, GadgetReport& rep)
{
    rep.name = g.name;
    rep.kind = g.kind;
    rep.forced_port = g.forced_port;
    std::vector<Dir> ds;
    for (auto& [d, p] : g.exits) ds.push_back(d);
    for (size_t i = 0; i < ds.size(); ++i)
        for (size_t j = i + 1; j < ds.size(); ++j) rep.pairs.push_back({ds[i], ds[j]});
    std::sort(rep.pairs.begin(), rep.pairs.end(),
              [](auto& x, auto& y) { return pair_label(x.a, x.b) < pair_label(y.a, y.b); });
}

inline PairResult* find_pair(GadgetReport& rep, Dir a, Dir b)
{
    for (auto& p : rep.pairs)
        if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return &p;
    return nullptr;
}

// record a completed fragment by the crossings it uses
inline void record(GadgetReport& rep, const std::vector<Crossing>& used, bool counted)
{
    bool all_ports = std::all_of(used.begin(), used.end(), [](auto& c) { return c.port; });
    if (used.size() == 2 && all_ports) {
        auto* p = find_pair(rep, used[0].dir, used[1].dir);
        p->feasible = true;
        p->counted = counted;
        ++p->count;
        return;
    }
    if (rep.spurious.size() >= 20) return;
    std::string s = "fragment using " + std::to_string(used.size()) + " crossings";
    for (auto& c : used) s += (&c == &used[0] ? ": " : ", ") + crossing_name(c) + (c.port ? "" : " (not a port)");
    rep.spurious.push_back(s);
}

inline void finish_forced(GadgetReport& rep)
{
    if (!rep.forced_port) return;
    bool ok = true;
    for (auto& p : rep.pairs)
        if (p.a != *rep.forced_port && p.b != *rep.forced_port && p.feasible) ok = false;
    rep.forced_ok = ok;
}

// grandtour and entryexit: open cover search with a stub at every border crossing
struct CoverModel {
    CycleSearch search;
    std::vector<Edge> inner;          // by edge id, for non-stub edges
    std::map<int, Crossing> stub_of; // edge id -> crossing
    Dims dims;

    CoverModel(const Gadget& g) : search(g.dims().size()), dims(g.dims())
    {
        for (const Edge& e : grid_edges(dims)) {
            int id = search.add_edge(dims.index(e.a), dims.index(e.b));
            inner.resize(id + 1);
            inner[id] = e;
            if (g.kind == GadgetKind::grandtour && g.forced.count(e)) search.fix(id, true);
        }
        for (auto& c : border_crossings(g)) {
            int id = search.add_edge(dims.index(c.at), CycleSearch::kStub);
            stub_of[id] = c;
        }
        if (g.kind == GadgetKind::entryexit) {
            EntryExitInstance inst{g.rows, g.cols, g.region_of};
            std::vector<std::vector<int>> crossing(inst.num_regions());
            for (size_t id = 0; id < inner.size(); ++id) {
                int ra = inst.region(inner[id].a), rb = inst.region(inner[id].b);
                if (ra != rb) {
                    crossing[ra].push_back(static_cast<int>(id));
                    crossing[rb].push_back(static_cast<int>(id));
                }
            }
            for (auto& [id, c] : stub_of) crossing[inst.region(c.at)].push_back(id);
            for (auto& cs : crossing) search.add_exact_count(cs, 2);
        }
    }

    std::vector<Crossing> used(const std::vector<EdgeState>& st) const
    {
        std::vector<Crossing> out;
        for (auto& [id, c] : stub_of)
            if (st[id] == EdgeState::in) out.push_back(c);
        return out;
    }
};

inline SearchStatus cover_exhaustive(const Gadget& g, GadgetReport& rep, std::uint64_t budget)
{
    CoverModel m(g);
    SearchOptions o;
    o.closed = false;
    o.allow_full_cycle = true;
    o.node_budget = budget;
    GadgetReport trial = rep;
    auto st = m.search.search(
        [&](const std::vector<EdgeState>& s) {
            record(trial, m.used(s), true);
            return true;
        },
        o);
    if (st == SearchStatus::complete) rep = trial;
    return st;
}

// existence only: one search per pair, one refutation per non-port crossing, one for closed loops
inline void cover_feasibility(const Gadget& g, GadgetReport& rep, std::uint64_t budget)
{
    auto run = [&](const std::function<void(CoverModel&)>& setup, bool closed_loop) {
        CoverModel m(g);
        setup(m);
        SearchOptions o;
        o.closed = closed_loop;
        o.node_budget = budget;
        bool found = false;
        auto st = m.search.search([&](const std::vector<EdgeState>&) { return found = true, false; }, o);
        if (st == SearchStatus::budget_exhausted)
            throw BudgetError(g.name + ": feasibility search exceeded the node budget");
        return found;
    };
    for (auto& p : rep.pairs) {
        p.feasible = run(
            [&](CoverModel& m) {
                for (auto& [id, c] : m.stub_of) m.search.fix(id, c.port && (c.dir == p.a || c.dir == p.b));
            },
            false);
        p.counted = false;
    }
    CoverModel probe(g);
    for (auto& [sid, cross] : probe.stub_of) {
        if (cross.port) continue;
        int target = sid;
        if (run([&](CoverModel& m) { m.search.fix(target, true); }, false))
            rep.spurious.push_back("fragment using non-port crossing " + crossing_name(cross));
    }
    // a closed loop through every vertex; odd vertex counts rule it out on a bipartite grid
    bool loop = false;
    if (g.dims().size() % 2 == 0 || g.kind == GadgetKind::entryexit)
        loop = run([&](CoverModel& m) { for (auto& [id, c] : m.stub_of) m.search.fix(id, false); }, true);
    if (loop) rep.spurious.push_back("closed loop using no crossings");
    rep.mode = "feasibility";
}

// zahlen: simple paths between border crossings avoiding zeros, each distinct non-zero value once
inline void zahlen_fragments(const Gadget& g, GadgetReport& rep)
{
    Dims d = g.dims();
    auto vals = zahlen_values(g);
    std::set<long long> want;
    for (long long v : vals)
        if (v != 0) want.insert(v);
    auto crossings = border_crossings(g);
    std::vector<int> path;
    std::set<long long> used_vals;
    std::vector<bool> used(d.size(), false);
    const Crossing* start = nullptr;
    std::function<void()> go = [&] {
        int h = path.back();
        if (used_vals.size() == want.size())
            for (auto& c : crossings)
                if (d.index(c.at) == h && *start < c) record(rep, {*start, c}, true);
        for (Coord q : neighbors(d.at(h), d)) {
            int j = d.index(q);
            if (used[j] || vals[j] == 0 || used_vals.count(vals[j])) continue;
            used[j] = true;
            used_vals.insert(vals[j]);
            path.push_back(j);
            go();
            path.pop_back();
            used_vals.erase(vals[j]);
            used[j] = false;
        }
    };
    for (auto& c : crossings) {
        int i = d.index(c.at);
        if (vals[i] == 0) continue;
        start = &c;
        used[i] = true;
        used_vals.insert(vals[i]);
        path = {i};
        go();
        used_vals.erase(vals[i]);
        used[i] = false;
    }
}

// lattice points where a strand crosses each side through an exit cell
inline std::vector<Coord> port_points(Dir d, Coord cell)
{
    switch (d) {
    case Dir::up: return {{cell.row, cell.col}, {cell.row, cell.col + 1}};
    case Dir::down: return {{cell.row + 1, cell.col}, {cell.row + 1, cell.col + 1}};
    case Dir::left: return {{cell.row, cell.col}, {cell.row + 1, cell.col}};
    case Dir::right: return {{cell.row, cell.col + 1}, {cell.row + 1, cell.col + 1}};
    }
    return {};
}

// local rules for strands inside a cut-out patch: even degree inside, turns only at dots,
// crossings only away from dots, and no region mixing sheep and wolves
inline bool strands_locally_valid(Dims cells, const EdgeSet& segs, const std::set<Coord>& dots,
                                  const std::vector<Animal>& animals)
{
    std::map<Coord, std::vector<Coord>> adj;
    for (const Edge& e : segs) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& [p, ns] : adj) {
        bool border = p.row == 0 || p.col == 0 || p.row == cells.rows || p.col == cells.cols;
        if (border) {
            if (ns.size() != 1) return false;
            continue;
        }
        if (ns.size() % 2) return false;
        if (ns.size() == 4 && dots.count(p)) return false;
        if (ns.size() == 2 && dir_between(ns[0], p) != dir_between(p, ns[1]) && !dots.count(p)) return false;
    }
    auto reg = regions_from_cuts(cells, segs);
    std::vector<std::pair<bool, bool>> an(reg.count, {false, false});
    for (int i = 0; i < cells.size(); ++i) {
        if (animals[i] == Animal::sheep) an[reg.region_of[i]].first = true;
        if (animals[i] == Animal::wolf) an[reg.region_of[i]].second = true;
    }
    for (auto [s, w] : an)
        if (s && w) return false;
    return true;
}

// yagit: every subset of the block's interior unit segments that obeys the local rules
inline void yagit_fragments(const Gadget& g, GadgetReport& rep)
{
    std::vector<Edge> pool;
    for (int r = 0; r <= g.rows; ++r)
        for (int c = 0; c <= g.cols; ++c) {
            if (c < g.cols && r > 0 && r < g.rows) pool.push_back(Edge({r, c}, {r, c + 1}));
            if (r < g.rows && c > 0 && c < g.cols) pool.push_back(Edge({r, c}, {r + 1, c}));
        }
    std::map<Coord, Dir> port_of;
    for (auto& [d, cell] : g.exits)
        for (Coord p : port_points(d, cell)) port_of[p] = d;
    for (unsigned long mask = 0; mask < (1ul << pool.size()); ++mask) {
        EdgeSet segs;
        for (size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1) segs.insert(pool[i]);
        if (!strands_locally_valid(g.dims(), segs, g.dots, g.animals)) continue;
        std::map<Coord, int> deg;
        for (const Edge& e : segs) ++deg[e.a], ++deg[e.b];
        std::vector<Coord> ends;
        for (auto& [p, k] : deg)
            if (k == 1) ends.push_back(p);
        std::map<Dir, int> per_port;
        bool stray = false;
        for (Coord p : ends) {
            auto it = port_of.find(p);
            if (it == port_of.end()) stray = true;
            else ++per_port[it->second];
        }
        TraversalType t = g.rows == 3 && g.cols == 3 ? classify_block_segments(segs, g.orientation) : TraversalType::invalid;
        std::string what = "strand set with " + std::to_string(ends.size()) + " border crossings";
        if (stray || ends.empty()) {
            if (rep.spurious.size() < 20) rep.spurious.push_back(what + (stray ? " outside the ports" : ""));
            continue;
        }
        if (t == TraversalType::c) {
            ++rep.type_c;
            if (g.forced_port && per_port[*g.forced_port] != 2) rep.forced_ok = false;
            continue;
        }
        std::vector<Dir> full;
        for (auto& [d, k] : per_port)
            if (k == 2) full.push_back(d);
        if ((t == TraversalType::a || t == TraversalType::b) && full.size() == 2 && per_port.size() == 2) {
            auto* p = find_pair(rep, full[0], full[1]);
            p->feasible = true;
            p->counted = true;
            ++p->count;
            continue;
        }
        if (rep.spurious.size() < 20) rep.spurious.push_back(what + " matching no traversal type");
    }
}

// A block with an odd number of cells (or vertices) has one more square of the corner colour.
// One pass covering all of it must start and end on that colour.
inline void parity_notes(const Gadget& g, GadgetReport& rep)
{
    if (g.kind != GadgetKind::grandtour && g.kind != GadgetKind::entryexit) return;
    if (g.rows * g.cols % 2 == 0) return;
    for (auto& p : rep.pairs) {
        Coord a = g.exits.at(p.a), b = g.exits.at(p.b);
        if ((a.row + a.col) % 2 == 0 && (b.row + b.col) % 2 == 0) continue;
        rep.notes.push_back(pair_label(p.a, p.b) + ": ports " + to_string(a) + " and " + to_string(b) +
                            " are not both on the corner colour of an odd block, so no single pass covers it");
    }
}

} // namespace detail

inline GadgetReport verify_gadget(const Gadget& g, const VerifyOptions& opts = {})
{
    if (g.corner()) throw UnsupportedError(g.name + " is a corner cell, not a T-metacell");
    GadgetReport rep;
    detail::init_pairs(g, rep);
    switch (g.kind) {
    case GadgetKind::grandtour:
    case GadgetKind::entryexit:
        if (opts.mode == VerifyMode::feasibility) {
            detail::cover_feasibility(g, rep, 0);
        } else {
            auto st = detail::cover_exhaustive(g, rep, opts.node_budget);
            if (st == SearchStatus::budget_exhausted) {
                if (opts.mode == VerifyMode::exhaustive)
                    throw BudgetError(g.name + ": exhaustive enumeration exceeded the node budget");
                detail::cover_feasibility(g, rep, 0);
                rep.downgrade = "exhaustive enumeration exceeded " + std::to_string(opts.node_budget) +
                                " search nodes; certified by port-pair feasibility search";
            }
        }
        break;
    case GadgetKind::zahlen: detail::zahlen_fragments(g, rep); break;
    case GadgetKind::yagit: detail::yagit_fragments(g, rep); break;
    }
    if (!rep.forced_ok.has_value() || *rep.forced_ok) detail::finish_forced(rep);
    detail::parity_notes(g, rep);
    return rep;
}

// First internal traversal between two exits in search order. Grand Tour: edges among
// block vertices (forced ones included). Entry-Exit: adjacencies between block cells.
inline std::optional<EdgeSet> gadget_completion(const Gadget& g, Dir a, Dir b)
{
    if (g.kind != GadgetKind::grandtour && g.kind != GadgetKind::entryexit)
        throw UnsupportedError("completions are only defined for grandtour and entryexit blocks");
    detail::CoverModel m(g);
    for (auto& [id, c] : m.stub_of) m.search.fix(id, c.port && (c.dir == a || c.dir == b));
    SearchOptions o;
    o.closed = false;
    std::optional<EdgeSet> out;
    m.search.search(
        [&](const std::vector<EdgeState>& st) {
            EdgeSet es;
            for (int id : CycleSearch::in_edges(st))
                if (!m.stub_of.count(id)) es.insert(m.inner[id]);
            out = es;
            return false;
        },
        o);
    return out;
}

// cells of a zahlen block path from exit a to exit b
inline std::optional<std::vector<Coord>> zahlen_block_path(const Gadget& g, Dir a, Dir b)
{
    Dims d = g.dims();
    auto vals = zahlen_values(g);
    std::set<long long> want;
    for (long long v : vals)
        if (v != 0) want.insert(v);
    Coord s = g.exits.at(a), t = g.exits.at(b);
    std::vector<Coord> path{s};
    std::set<long long> used{vals[d.index(s)]};
    std::optional<std::vector<Coord>> out;
    std::function<void()> go = [&] {
        if (out) return;
        if (path.back() == t) {
            if (used.size() == want.size()) out = path;
            return;
        }
        for (Coord q : neighbors(path.back(), d)) {
            long long v = vals[d.index(q)];
            if (v == 0 || used.count(v) || std::find(path.begin(), path.end(), q) != path.end()) continue;
            used.insert(v);
            path.push_back(q);
            go();
            path.pop_back();
            used.erase(v);
        }
    };
    if (vals[d.index(s)] != 0) go();
    return out;
}

// ---- type-c groups ----

// Four yagit blocks in a 2x2 patch, each showing the three-port traversal. A choice of
// orientations is consistent when strands leave the patch only through forced ports and
// obey the local rules everywhere inside.
inline std::vector<std::array<D4Transform, 4>> type_c_group_variants()
{
    Gadget base = builtin("yagit3");
    const EdgeSet& c = traversal_pattern(TraversalType::c);
    const std::array<Coord, 4> origins{Coord{0, 0}, Coord{0, 3}, Coord{3, 0}, Coord{3, 3}};
    Dims patch{6, 6};
    auto ts = all_transforms();
    std::vector<std::array<D4Transform, 4>> out;
    std::array<D4Transform, 4> pick;
    for (int code = 0; code < 8 * 8 * 8 * 8; ++code) {
        int x = code;
        for (int b = 0; b < 4; ++b, x /= 8) pick[b] = ts[x % 8];
        EdgeSet segs;
        std::set<Coord> dots, forced_points;
        std::vector<Animal> animals(patch.size());
        for (int b = 0; b < 4; ++b) {
            Gadget g = transform_gadget(base, pick[b]);
            Coord o = origins[b];
            for (const Edge& e : apply_transform(pick[b], c, {4, 4})) segs.insert(offset(e, o));
            for (Coord p : g.dots) dots.insert(offset(p, o));
            for (int i = 0; i < 9; ++i) animals[patch.index(offset(Coord{i / 3, i % 3}, o))] = g.animals[i];
            for (Coord p : detail::port_points(*g.forced_port, g.exits.at(*g.forced_port))) forced_points.insert(offset(p, o));
        }
        if (!detail::strands_locally_valid(patch, segs, dots, animals)) continue;
        std::map<Coord, int> deg;
        for (const Edge& e : segs) ++deg[e.a], ++deg[e.b];
        bool ok = true;
        for (auto& [p, k] : deg) {
            bool border = p.row == 0 || p.col == 0 || p.row == 6 || p.col == 6;
            if (border && !forced_points.count(p)) ok = false;
        }
        if (ok) out.push_back(pick);
    }
    return out;
}

} // namespace tmc
