#pragma once

#include "tmc/reduce.hpp"

namespace tmc {

struct AuditOptions {
    long long cap = 2000;                   // per side
    std::uint64_t node_budget = 5000000;    // per target search; an unsolvable Entry-Exit target can run far longer
    ReduceOptions reduce;
};

struct AuditFinding {
    std::string kind;
    std::string detail;
    bool operator==(const AuditFinding&) const = default;
};

struct AuditReport {
    Target target = Target::grandtour;
    long long source_count = 0;
    bool source_truncated = false;
    long long target_count = 0;
    bool target_truncated = false;
    std::vector<int> mapping; // target solution -> source cycle index, -1 when extraction failed
    bool extract_total = false;
    bool surjective = false;
    bool injective = false;
    std::string verdict;
    std::vector<AuditFinding> findings;
};

namespace detail {

// Yagit solutions assembled from block traversals only: every non-corner block takes
// pattern a, b or c; the drawing must then pass the validator. The general solver is
// not used here (its line search does not scale to reduced instances).
inline Enumeration<YagitSolution> enumerate_block_drawings(const ReductionTrace& tr, long long cap)
{
    Enumeration<YagitSolution> out;
    auto inst = std::get<YagitInstance>(rebuild_instance(tr));
    Dims sd = tr.source.dims();
    const int n = sd.size();
    EdgeSet frame = yagit_frame_segments(tr);
    std::vector<TraversalType> pick(n, TraversalType::a);
    const TraversalType kinds[] = {TraversalType::a, TraversalType::b, TraversalType::c};
    std::function<bool(int)> go = [&](int i) -> bool {
        if (i == n) {
            EdgeSet segs = frame;
            for (int k = 1; k < n; ++k) {
                auto part = block_pattern(tr.blocks[k], pick[k]);
                segs.insert(part.begin(), part.end());
            }
            YagitSolution sol;
            try {
                sol = segments_to_solution(inst, segs);
            } catch (const GeometryError&) {
                return true;
            }
            if (!validate(inst, sol).ok()) return true;
            if (static_cast<long long>(out.solutions.size()) == cap) {
                out.truncated = true;
                return false;
            }
            out.solutions.push_back(std::move(sol));
            return true;
        }
        for (TraversalType k : kinds) {
            pick[i] = k;
            // ports towards already chosen blocks must agree
            bool ok = true;
            auto mine = block_exits(tr, i, k);
            for (Dir d : kDirs) {
                Coord q = step(sd.at(i), d);
                if (!sd.contains(q) || sd.index(q) > i) continue;
                auto theirs = block_exits(tr, sd.index(q), pick[sd.index(q)]);
                bool a = std::find(mine.begin(), mine.end(), d) != mine.end();
                bool b = std::find(theirs.begin(), theirs.end(), opposite(d)) != theirs.end();
                // a type-c block's inner ports are open; leave those to the validator
                bool open = k == TraversalType::c || pick[sd.index(q)] == TraversalType::c;
                if (a != b && !open) ok = false;
            }
            if (ok && !go(i + 1)) return false;
        }
        return true;
    };
    go(1);
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const YagitSolution& x, const YagitSolution& y) { return x.lines < y.lines; });
    return out;
}

inline Enumeration<TargetSolution> enumerate_target(const Reduction& red, const AuditOptions& opts)
{
    Enumeration<TargetSolution> out;
    auto take = [&](auto en) {
        for (auto& s : en.solutions) out.solutions.push_back(std::move(s));
        out.truncated = en.truncated;
    };
    if (red.trace.trivial_unsat) return out;
    switch (red.trace.target) {
    case Target::grandtour: take(enumerate(std::get<GrandTourInstance>(red.instance), opts.cap, opts.node_budget)); break;
    case Target::entryexit: take(enumerate(std::get<EntryExitInstance>(red.instance), opts.cap, opts.node_budget)); break;
    case Target::zahlen: take(enumerate(std::get<ZahlenInstance>(red.instance), opts.cap, opts.node_budget)); break;
    case Target::yagit: take(enumerate_block_drawings(red.trace, opts.cap)); break;
    }
    return out;
}

} // namespace detail

// Enumerate both sides, extract every target solution and compare.
inline AuditReport audit_bijection(const MetacellGridInstance& src, Target target, const AuditOptions& opts = {})
{
    check_cap(opts.cap);
    AuditReport rep;
    rep.target = target;
    Reduction red = reduce(src, target, opts.reduce);
    auto sources = enumerate_cycles(src, opts.cap);
    rep.source_count = static_cast<long long>(sources.solutions.size());
    rep.source_truncated = sources.truncated;
    std::map<EdgeSet, int> index;
    for (size_t i = 0; i < sources.solutions.size(); ++i) index[sources.solutions[i].edges] = static_cast<int>(i);

    Enumeration<TargetSolution> targets;
    try {
        targets = detail::enumerate_target(red, opts);
    } catch (const BudgetError& e) {
        targets.truncated = true;
        rep.findings.push_back({"target-budget", e.what()});
    }
    rep.target_count = static_cast<long long>(targets.solutions.size());
    rep.target_truncated = targets.truncated;

    rep.extract_total = true;
    std::map<int, std::vector<int>> preimages;
    for (size_t i = 0; i < targets.solutions.size(); ++i) {
        int hit = -1;
        try {
            auto c = extract(targets.solutions[i], red.trace);
            auto it = index.find(c.edges);
            if (it != index.end()) hit = it->second;
            else if (!rep.source_truncated)
                rep.findings.push_back({"unlisted-cycle", "target solution " + std::to_string(i) +
                                                              " extracts to a cycle missing from the source enumeration"});
        } catch (const Error& e) {
            rep.findings.push_back({"extract-failed", "target solution " + std::to_string(i) + ": " + e.what()});
        }
        if (hit < 0 && !rep.source_truncated) rep.extract_total = false;
        rep.mapping.push_back(hit);
        if (hit >= 0) preimages[hit].push_back(static_cast<int>(i));
    }

    // every source cycle lifts to a valid target solution that extracts back to it
    rep.surjective = true;
    for (size_t i = 0; i < sources.solutions.size(); ++i) {
        const auto& c = sources.solutions[i];
        bool back = false;
        try {
            auto sol = lift(c, red.trace);
            back = validate_target(red.instance, sol).ok() && extract(sol, red.trace) == c;
        } catch (const Error&) {
        }
        if (!back) {
            rep.surjective = false;
            rep.findings.push_back({"lift-failed", "source cycle " + std::to_string(i) + " does not round trip"});
        }
    }

    rep.injective = true;
    for (auto& [s, ts] : preimages)
        if (ts.size() > 1) {
            rep.injective = false;
            std::string list;
            for (int t : ts) list += (list.empty() ? "" : ",") + std::to_string(t);
            rep.findings.push_back({"non-injective", "source cycle " + std::to_string(s) + " has " +
                                                         std::to_string(ts.size()) + " target solutions: " + list});
        }

    bool complete = !rep.source_truncated && !rep.target_truncated;
    if (!rep.extract_total) rep.verdict = "mismatch";
    else if (!rep.surjective && rep.injective) rep.verdict = complete ? "injective-only" : "inconclusive";
    else if (!rep.surjective) rep.verdict = "mismatch";
    else if (!rep.injective) rep.verdict = "surjective-only";
    else rep.verdict = complete ? "bijective" : "inconclusive";
    if (rep.verdict == "bijective" && rep.source_count != rep.target_count)
        throw InvariantError("bijective audit with unequal counts");
    if (!complete) rep.findings.push_back({"truncated", "enumeration stopped at the cap or node budget"});
    return rep;
}

inline json audit_json(const AuditReport& r)
{
    json findings = json::array();
    for (auto& f : r.findings) findings.push_back({{"kind", f.kind}, {"detail", f.detail}});
    return json{{"target", target_name(r.target)},
                {"source_count", r.source_count},
                {"source_truncated", r.source_truncated},
                {"target_count", r.target_count},
                {"target_truncated", r.target_truncated},
                {"mapping", r.mapping},
                {"extract_total", r.extract_total},
                {"surjective", r.surjective},
                {"injective", r.injective},
                {"verdict", r.verdict},
                {"findings", findings}};
}

} // namespace tmc
