#pragma once

#include <optional>

#include "tmc/grid.hpp"
#include "tmc/json_util.hpp"
#include "tmc/report.hpp"

namespace tmc {

struct ZahlenInstance {
    int rows = 0, cols = 0;
    std::vector<long long> values; // row-major
    bool closed = false;

    Dims dims() const { return {rows, cols}; }
    long long value(Coord p) const { return values.at(dims().index(p)); }
    bool operator==(const ZahlenInstance&) const = default;
};

struct CellPath {
    std::vector<Coord> cells;
    bool operator==(const CellPath&) const = default;
    auto operator<=>(const CellPath& o) const { return cells <=> o.cells; }
};

inline Report validate(const ZahlenInstance& inst, const CellPath& sol)
{
    Report rep;
    Dims d = inst.dims();
    if (static_cast<int>(inst.values.size()) != d.size() || d.size() == 0) {
        rep.add("value grid has wrong size");
        return rep;
    }
    const auto& v = sol.cells;
    if (v.empty()) {
        rep.add("path is empty");
        return rep;
    }
    for (Coord p : v)
        if (!d.contains(p)) {
            rep.add("cell " + to_string(p) + " out of bounds");
            return rep;
        }
    if (v.front() != Coord{0, 0}) rep.add("path must start at (0,0)");
    Coord goal{inst.rows - 1, inst.cols - 1};
    if (inst.closed) {
        if (v.size() < 4) rep.add("loop needs at least 4 cells");
        else if (!adjacent(v.back(), v.front())) rep.add("loop does not return to (0,0)");
    } else if (v.back() != goal) {
        rep.add("path must end at " + to_string(goal));
    }
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!adjacent(v[i], v[i + 1]))
            rep.add("cells " + to_string(v[i]) + " and " + to_string(v[i + 1]) + " are consecutive but not adjacent");
    std::set<Coord> seen;
    for (Coord p : v)
        if (!seen.insert(p).second) rep.add("cell " + to_string(p) + " visited twice");
    std::map<long long, int> on_path;
    for (Coord p : v) {
        long long val = inst.value(p);
        if (++on_path[val] == 2) rep.add("value " + std::to_string(val) + " repeated at " + to_string(p));
    }
    std::set<long long> all(inst.values.begin(), inst.values.end());
    for (long long val : all)
        if (!on_path.count(val)) rep.add("value " + std::to_string(val) + " missing from the path");
    return rep;
}

namespace detail {

class ZahlenSearch {
public:
    ZahlenSearch(const ZahlenInstance& inst, std::uint64_t budget) : inst_(inst), d_(inst.dims()), budget_(budget)
    {
        std::map<long long, int> ids;
        for (long long v : inst.values) ids.emplace(v, 0);
        int k = 0;
        for (auto& [v, id] : ids) id = k++;
        nvals_ = k;
        vid_.reserve(inst.values.size());
        for (long long v : inst.values) vid_.push_back(ids[v]);
        val_used_.assign(nvals_, false);
        cell_used_.assign(d_.size(), false);
        goal_ = inst.closed ? -1 : d_.index({inst.rows - 1, inst.cols - 1});
    }

    // calls f for each solution in move order; f returns false to stop
    template <class F>
    void run(F&& f)
    {
        stop_ = false;
        take(0);
        go(f);
        release(0);
    }

private:
    void take(int i)
    {
        path_.push_back(i);
        cell_used_[i] = true;
        val_used_[vid_[i]] = true;
        ++covered_;
    }
    void release(int i)
    {
        path_.pop_back();
        cell_used_[i] = false;
        val_used_[vid_[i]] = false;
        --covered_;
    }

    bool free_cell(int i) const { return !cell_used_[i] && !val_used_[vid_[i]]; }

    // from the current head, can every missing value and the finish still be reached
    bool reachable() const
    {
        std::vector<bool> vis(d_.size(), false), got(nvals_, false);
        std::vector<int> st{path_.back()};
        vis[path_.back()] = true;
        bool finish = false;
        while (!st.empty()) {
            int i = st.back();
            st.pop_back();
            for (Coord q : neighbors(d_.at(i), d_)) {
                int j = d_.index(q);
                if (inst_.closed && j == 0) finish = true;
                if (vis[j] || !free_cell(j)) continue;
                vis[j] = true;
                got[vid_[j]] = true;
                if (j == goal_) {
                    finish = true;
                    continue; // the path cannot continue past the finish
                }
                st.push_back(j);
            }
        }
        if (!finish) return false;
        for (int v = 0; v < nvals_; ++v)
            if (!val_used_[v] && !got[v]) return false;
        return true;
    }

    template <class F>
    void go(F& f)
    {
        if (stop_) return;
        if (budget_ && ++nodes_ > budget_) throw BudgetError("zahlen search exceeded the node budget");
        int head = path_.back();
        if (inst_.closed) {
            if (covered_ == nvals_ && path_.size() >= 4 && adjacent(d_.at(head), Coord{0, 0}) && path_[1] < head) {
                if (!f(current())) stop_ = true;
            }
        } else if (head == goal_) {
            if (covered_ == nvals_ && !f(current())) stop_ = true;
            return;
        }
        if (covered_ == nvals_) return; // every value used, nothing else can be added
        if (!reachable()) return;
        for (Coord q : neighbors(d_.at(head), d_)) {
            int j = d_.index(q);
            if (!free_cell(j)) continue;
            take(j);
            go(f);
            release(j);
            if (stop_) return;
        }
    }

    CellPath current() const
    {
        CellPath p;
        for (int i : path_) p.cells.push_back(d_.at(i));
        return p;
    }

    const ZahlenInstance& inst_;
    Dims d_;
    std::uint64_t budget_, nodes_ = 0;
    int nvals_ = 0, goal_ = -1, covered_ = 0;
    std::vector<int> vid_, path_;
    std::vector<bool> val_used_, cell_used_;
    bool stop_ = false;
};

} // namespace detail

// solutions in lexicographic order of their move sequences (up, right, down, left)
inline Enumeration<CellPath> enumerate(const ZahlenInstance& inst, long long cap, std::uint64_t node_budget = 0)
{
    check_cap(cap);
    Enumeration<CellPath> out;
    Dims d = inst.dims();
    if (static_cast<int>(inst.values.size()) != d.size() || d.size() == 0) return out;
    if (inst.rows * inst.cols == 1 && !inst.closed) {
        out.solutions.push_back({{{0, 0}}});
        return out;
    }
    detail::ZahlenSearch s(inst, node_budget);
    s.run([&](CellPath p) {
        if (static_cast<long long>(out.solutions.size()) == cap) {
            out.truncated = true;
            return false;
        }
        out.solutions.push_back(std::move(p));
        return true;
    });
    return out;
}

inline std::optional<CellPath> solve(const ZahlenInstance& inst, std::uint64_t node_budget = 0)
{
    auto e = enumerate(inst, 1, node_budget);
    if (e.solutions.empty()) return std::nullopt;
    return e.solutions.front();
}

inline json zahlen_json(const ZahlenInstance& inst)
{
    json rows = json::array();
    for (int r = 0; r < inst.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < inst.cols; ++c) row.push_back(inst.value({r, c}));
        rows.push_back(row);
    }
    return json{{"rows", inst.rows}, {"cols", inst.cols}, {"values", rows}, {"closed", inst.closed}};
}

inline ZahlenInstance zahlen_from_json(const json& j, const std::string& path = "$")
{
    using namespace jsonio;
    ZahlenInstance inst;
    inst.rows = int_field(j, "rows", path, 1);
    inst.cols = int_field(j, "cols", path, 1);
    inst.closed = bool_field(j, "closed", path, false);
    std::string vp = key_path(path, "values");
    const json& m = array_at(field(j, "values", path), vp);
    if (static_cast<int>(m.size()) != inst.rows) throw InputError(vp + ": expected " + std::to_string(inst.rows) + " rows");
    for (int r = 0; r < inst.rows; ++r) {
        const json& row = array_at(m[r], index_path(vp, r));
        if (static_cast<int>(row.size()) != inst.cols)
            throw InputError(index_path(vp, r) + ": expected " + std::to_string(inst.cols) + " entries");
        for (int c = 0; c < inst.cols; ++c) {
            long long v = as_int(row[c], index_path(index_path(vp, r), c));
            if (v < 0) throw InputError(index_path(index_path(vp, r), c) + ": values must be non-negative");
            inst.values.push_back(v);
        }
    }
    return inst;
}

inline json solution_json(const CellPath& s) { return json{{"cells", jsonio::coord_list_json(s.cells)}}; }

inline CellPath cell_path_from_json(const json& j, const std::string& path = "$")
{
    return {jsonio::as_coord_list(jsonio::field(j, "cells", path), jsonio::key_path(path, "cells"))};
}

} // namespace tmc
