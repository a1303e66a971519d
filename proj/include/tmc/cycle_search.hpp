#pragma once

// Edge-state backtracking for degree-2 spanning structures on small graphs.
// Closed mode looks for one Hamiltonian cycle; open mode looks for sets of
// vertex-disjoint paths covering every vertex whose ends are "stubs"
// (half edges leaving the graph), which is what gadget verification needs.

#include <cstdint>
#include <utility>
#include <vector>

#include "tmc/errors.hpp"

namespace tmc {

enum class EdgeState : std::uint8_t { undecided, in, out };

enum class SearchStatus { complete, stopped, budget_exhausted };

struct SearchOptions {
    bool closed = true;
    bool allow_full_cycle = false; // open mode only
    std::uint64_t node_budget = 0; // 0 means unlimited
};

class CycleSearch {
public:
    static constexpr int kStub = -1;

    explicit CycleSearch(int num_vertices) : n_(num_vertices), inc_(num_vertices) {}

    int add_edge(int u, int v)
    {
        if (u < 0 || u >= n_ || v >= n_ || v < kStub || u == v) throw ArgumentError("bad edge endpoints");
        int e = static_cast<int>(eu_.size());
        eu_.push_back(u);
        if (v == kStub) {
            ev_.push_back(n_ + stubs_);
            ++stubs_;
        } else {
            ev_.push_back(v);
            inc_[v].push_back(e);
        }
        inc_[u].push_back(e);
        edge_cons_.emplace_back();
        return e;
    }

    // exactly `count` of `edges` must be in
    void add_exact_count(const std::vector<int>& edges, int count)
    {
        int c = static_cast<int>(cons_edges_.size());
        cons_edges_.push_back(edges);
        cons_count_.push_back(count);
        for (int e : edges) edge_cons_.at(e).push_back(c);
    }

    void fix(int e, bool in) { fixed_.emplace_back(e, in); }

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(eu_.size()); }
    bool is_stub(int e) const { return ev_[e] >= n_; }
    std::pair<int, int> endpoints(int e) const { return {eu_[e], ev_[e] >= n_ ? kStub : ev_[e]}; }
    std::uint64_t nodes() const { return nodes_; }

    // on_solution(const std::vector<EdgeState>&) -> bool (false stops the search)
    template <class F>
    SearchStatus search(F&& on_solution, const SearchOptions& opts = {})
    {
        opts_ = opts;
        reset();
        status_ = SearchStatus::complete;
        bool ok = true;
        for (auto [e, in] : fixed_)
            if (!assign(e, in ? EdgeState::in : EdgeState::out)) {
                ok = false;
                break;
            }
        if (ok && propagate()) dfs(on_solution);
        return status_;
    }

    // helper: ids of in-edges of a solution state
    static std::vector<int> in_edges(const std::vector<EdgeState>& st)
    {
        std::vector<int> out;
        for (int e = 0; e < static_cast<int>(st.size()); ++e)
            if (st[e] == EdgeState::in) out.push_back(e);
        return out;
    }

private:
    struct EndRec {
        int idx, end, size;
    };

    int n_;
    int stubs_ = 0;
    std::vector<int> eu_, ev_;
    std::vector<std::vector<int>> inc_;
    std::vector<std::vector<int>> edge_cons_;
    std::vector<std::vector<int>> cons_edges_;
    std::vector<int> cons_count_;
    std::vector<std::pair<int, bool>> fixed_;

    SearchOptions opts_;
    SearchStatus status_ = SearchStatus::complete;
    std::uint64_t nodes_ = 0;

    std::vector<EdgeState> state_;
    std::vector<int> vin_, vund_, cin_, cund_;
    std::vector<int> end_, size_;
    int in_total_ = 0;
    bool closed_done_ = false;
    std::vector<int> trail_;
    std::vector<EndRec> end_trail_;
    std::vector<int> vq_, cq_, pending_out_;
    // scratch for connectivity checks
    std::vector<int> mark_, stack_;
    int stamp_ = 0;

    void reset()
    {
        int m = num_edges();
        state_.assign(m, EdgeState::undecided);
        vin_.assign(n_, 0);
        vund_.assign(n_, 0);
        for (int v = 0; v < n_; ++v) vund_[v] = static_cast<int>(inc_[v].size());
        cin_.assign(cons_edges_.size(), 0);
        cund_.resize(cons_edges_.size());
        for (size_t c = 0; c < cons_edges_.size(); ++c) cund_[c] = static_cast<int>(cons_edges_[c].size());
        end_.resize(n_ + stubs_);
        size_.resize(n_ + stubs_);
        for (int x = 0; x < n_ + stubs_; ++x) {
            end_[x] = x;
            size_[x] = x < n_ ? 1 : 0;
        }
        in_total_ = 0;
        closed_done_ = false;
        trail_.clear();
        end_trail_.clear();
        vq_.clear();
        cq_.clear();
        pending_out_.clear();
        nodes_ = 0;
        mark_.assign(n_, 0);
        stamp_ = 0;
        for (int v = 0; v < n_; ++v) vq_.push_back(v);
        for (size_t c = 0; c < cons_edges_.size(); ++c) cq_.push_back(static_cast<int>(c));
    }

    void set_end(int idx, int end, int size)
    {
        end_trail_.push_back({idx, end_[idx], size_[idx]});
        end_[idx] = end;
        size_[idx] = size;
    }

    bool assign(int e, EdgeState val)
    {
        if (state_[e] != EdgeState::undecided) return state_[e] == val;
        state_[e] = val;
        trail_.push_back(e);
        int u = eu_[e], v = ev_[e];
        bool in = val == EdgeState::in;
        --vund_[u];
        if (in) ++vin_[u];
        vq_.push_back(u);
        if (v < n_) {
            --vund_[v];
            if (in) ++vin_[v];
            vq_.push_back(v);
        }
        for (int c : edge_cons_[e]) {
            --cund_[c];
            if (in) ++cin_[c];
            cq_.push_back(c);
        }
        if (in) {
            ++in_total_;
            return join(e);
        }
        return true;
    }

    bool closure_allowed(int fragment_size) const
    {
        return (opts_.closed || opts_.allow_full_cycle) && fragment_size == n_;
    }

    bool join(int e)
    {
        int u = eu_[e], v = ev_[e];
        if (vin_[u] > 2 || (v < n_ && vin_[v] > 2)) return false;
        int a = end_[u], b = end_[v];
        if (a == v) {
            if (v >= n_ || !closure_allowed(size_[u])) return false;
            end_trail_.push_back({-1, 0, 0});
            closed_done_ = true;
            return true;
        }
        int sz = size_[u] + size_[v];
        set_end(a, b, sz);
        set_end(b, a, sz);
        if (a < n_ && b < n_ && !closure_allowed(sz)) {
            for (int f : inc_[a])
                if (state_[f] == EdgeState::undecided && (eu_[f] == b || ev_[f] == b)) pending_out_.push_back(f);
        }
        return true;
    }

    void undo(size_t mark, size_t emark)
    {
        while (trail_.size() > mark) {
            int e = trail_.back();
            trail_.pop_back();
            bool in = state_[e] == EdgeState::in;
            state_[e] = EdgeState::undecided;
            int u = eu_[e], v = ev_[e];
            ++vund_[u];
            if (in) --vin_[u];
            if (v < n_) {
                ++vund_[v];
                if (in) --vin_[v];
            }
            for (int c : edge_cons_[e]) {
                ++cund_[c];
                if (in) --cin_[c];
            }
            if (in) --in_total_;
        }
        while (end_trail_.size() > emark) {
            EndRec r = end_trail_.back();
            end_trail_.pop_back();
            if (r.idx < 0) {
                closed_done_ = false;
                continue;
            }
            end_[r.idx] = r.end;
            size_[r.idx] = r.size;
        }
        vq_.clear();
        cq_.clear();
        pending_out_.clear();
    }

    bool settle(const std::vector<int>& edges, int have, int und, int need)
    {
        if (have > need || have + und < need) return false;
        if (und == 0) return true;
        EdgeState fill;
        if (have == need)
            fill = EdgeState::out;
        else if (have + und == need)
            fill = EdgeState::in;
        else
            return true;
        for (int f : edges)
            if (state_[f] == EdgeState::undecided && !assign(f, fill)) return false;
        return true;
    }

    bool propagate()
    {
        for (;;) {
            if (!pending_out_.empty()) {
                int e = pending_out_.back();
                pending_out_.pop_back();
                if (!assign(e, EdgeState::out)) return false;
            } else if (!vq_.empty()) {
                int x = vq_.back();
                vq_.pop_back();
                if (!settle(inc_[x], vin_[x], vund_[x], 2)) return false;
            } else if (!cq_.empty()) {
                int c = cq_.back();
                cq_.pop_back();
                if (!settle(cons_edges_[c], cin_[c], cund_[c], cons_count_[c])) return false;
            } else {
                return true;
            }
        }
    }

    // Every vertex must stay reachable: closed mode needs one component,
    // open mode needs every component to own a usable stub.
    bool connected_enough()
    {
        if (n_ == 0) return true;
        ++stamp_;
        int reached_total = 0;
        for (int s = 0; s < n_; ++s) {
            if (mark_[s] == stamp_) continue;
            if (opts_.closed && s != 0) return false;
            int count = 0;
            bool has_stub = false;
            stack_.clear();
            stack_.push_back(s);
            mark_[s] = stamp_;
            while (!stack_.empty()) {
                int x = stack_.back();
                stack_.pop_back();
                ++count;
                for (int f : inc_[x]) {
                    if (state_[f] == EdgeState::out) continue;
                    int y = eu_[f] == x ? ev_[f] : eu_[f];
                    if (y >= n_) {
                        has_stub = true;
                        continue;
                    }
                    if (mark_[y] != stamp_) {
                        mark_[y] = stamp_;
                        stack_.push_back(y);
                    }
                }
            }
            reached_total += count;
            if (!opts_.closed && !has_stub && !(opts_.allow_full_cycle && count == n_)) return false;
        }
        return !opts_.closed || reached_total == n_;
    }

    int choose_edge() const
    {
        int best = -1, best_score = 1 << 30;
        for (int v = 0; v < n_; ++v) {
            if (vund_[v] == 0) continue;
            int score = (vin_[v] == 1 ? 0 : 8) + vund_[v];
            if (score < best_score) {
                best_score = score;
                best = v;
            }
        }
        if (best < 0) return -1;
        for (int f : inc_[best])
            if (state_[f] == EdgeState::undecided) return f;
        return -1;
    }

    template <class F>
    bool dfs(F& on_solution)
    {
        ++nodes_;
        if (opts_.node_budget && nodes_ > opts_.node_budget) {
            status_ = SearchStatus::budget_exhausted;
            return false;
        }
        if (!connected_enough()) return true;
        int e = choose_edge();
        if (e < 0) {
            if (opts_.closed && !closed_done_) return true;
            if (!on_solution(static_cast<const std::vector<EdgeState>&>(state_))) {
                status_ = SearchStatus::stopped;
                return false;
            }
            return true;
        }
        for (EdgeState val : {EdgeState::in, EdgeState::out}) {
            size_t mark = trail_.size(), emark = end_trail_.size();
            if (assign(e, val) && propagate()) {
                if (!dfs(on_solution)) {
                    undo(mark, emark);
                    return false;
                }
            }
            undo(mark, emark);
        }
        return true;
    }
};

} // namespace tmc
