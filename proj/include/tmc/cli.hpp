#pragma once

// Command-line front end. run() takes the argument list without the program name and
// writes machine output to `out` (or --out), prose to `err`.
// Exit codes: 0 ok, 1 negative answer, 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tmc/audit.hpp"
#include "tmc/render.hpp"

namespace tmc::cli {

enum Exit { ok = 0, negative = 1, usage = 2 };

struct Limits {
    std::uint64_t nodes = 0; // 0 = unlimited
    std::optional<int> lines;
};

// "nodes=K,lines=L", either key optional
inline Limits parse_limits(const std::string& s)
{
    Limits out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ArgumentError("--limits: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        long long v = 0;
        try {
            size_t used = 0;
            v = std::stoll(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ArgumentError("--limits: '" + val + "' is not an integer");
        }
        if (v <= 0) throw ArgumentError("--limits: " + key + " must be positive");
        if (key == "nodes") out.nodes = static_cast<std::uint64_t>(v);
        else if (key == "lines") out.lines = static_cast<int>(v);
        else throw ArgumentError("--limits: unknown key '" + key + "'");
    }
    return out;
}

// "RxC"
inline Dims parse_size(const std::string& s)
{
    auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw ArgumentError("--size: expected RxC, got '" + s + "'");
    }
}

inline json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

// run a loader on a file, naming the file in any input error
template <class F>
auto load_file(const std::string& path, F&& f)
{
    json j = read_json(path);
    try {
        return f(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

// documents written by this tool wrap their payload under one key; plain files are taken as is
inline const json& unwrap(const json& j, const char* key)
{
    if (j.is_object() && j.contains(key) && !j.contains("rows") && !j.contains("vrows")) return j.at(key);
    return j;
}

struct Options {
    std::string command;
    std::string puzzle;
    std::vector<std::string> files;
    long long cap = 100;
    int block_n = 0;
    std::optional<std::uint64_t> seed;
    std::string size = "2x2";
    bool forced = false;
    bool closed = false;
    std::string limits;
    std::string format;
    std::string out = "-";
};

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    int dispatch()
    {
        const std::string& c = o_.command;
        if (c == "solve") return solve();
        if (c == "enumerate") return enumerate_cmd();
        if (c == "validate") return validate_cmd();
        if (c == "gadget-verify") return gadget_verify();
        if (c == "reduce") return reduce_cmd();
        if (c == "lift") return lift_cmd();
        if (c == "extract") return extract_cmd();
        if (c == "audit") return audit_cmd();
        if (c == "render") return render_cmd();
        throw ArgumentError("unknown command " + c);
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;

    void emit_text(const std::string& text)
    {
        if (o_.out == "-") {
            out_ << text;
            return;
        }
        std::ofstream f(o_.out, std::ios::binary);
        if (!f) throw InputError(o_.out + ": cannot write");
        f << text;
    }
    void emit(const json& j) { emit_text(j.dump(2) + "\n"); }

    const std::string& file(size_t i, const char* what)
    {
        if (o_.files.size() <= i) throw ArgumentError(o_.command + ": missing " + what);
        return o_.files[i];
    }
    void max_files(size_t n)
    {
        if (o_.files.size() > n) throw ArgumentError(o_.command + ": unexpected argument " + o_.files[n]);
    }
    const std::string& need_puzzle()
    {
        if (o_.puzzle.empty()) throw ArgumentError(o_.command + ": --puzzle is required");
        return o_.puzzle;
    }
    Target need_target()
    {
        auto t = parse_target(need_puzzle());
        if (!t) throw ArgumentError(o_.command + ": --puzzle must be a target puzzle, not " + o_.puzzle);
        return *t;
    }
    Limits limits() const { return parse_limits(o_.limits); }

    // source from a file, or a random one from --seed
    MetacellGridInstance source(size_t i)
    {
        if (o_.files.size() > i)
            return load_file(o_.files[i], [](const json& j) { return metacell_from_json(unwrap(j, "source")); });
        if (!o_.seed) throw ArgumentError(o_.command + ": give a source instance file or --seed");
        Dims d = parse_size(o_.size);
        return random_instance(*o_.seed, d.rows, d.cols, o_.forced);
    }
    TargetInstance target_instance(Target t, const std::string& path)
    {
        return load_file(path, [t](const json& j) { return target_instance_from_json(t, unwrap(j, "instance")); });
    }
    TargetSolution target_solution(Target t, const std::string& path)
    {
        return load_file(path, [t](const json& j) { return target_solution_from_json(t, unwrap(j, "solution")); });
    }
    MetacellGridInstance metacell(const std::string& path)
    {
        auto inst = load_file(path, [](const json& j) { return metacell_from_json(unwrap(j, "instance")); });
        auto rep = validate_instance(inst);
        if (!rep.ok()) throw InputError(path + ": " + rep.violations.front());
        return inst;
    }
    MetacellCycle cycle(const std::string& path)
    {
        return load_file(path, [](const json& j) {
            return cycle_from_json(j.is_object() && j.contains("cycle") ? j.at("cycle") : unwrap(j, "solution"));
        });
    }

    int solve()
    {
        max_files(1);
        const std::string& p = need_puzzle();
        const std::string& path = file(0, "instance file");
        Limits lim = limits();
        json sol = nullptr;
        std::string status = "unsat";
        try {
            if (p == "tmetacell") {
                auto e = enumerate_cycles(metacell(path), 1, lim.nodes);
                if (!e.solutions.empty()) sol = cycle_json(e.solutions[0]);
            } else if (p == "yagit") {
                YagitLimits yl;
                if (lim.nodes) yl.max_nodes = lim.nodes;
                if (lim.lines) yl.max_lines = *lim.lines;
                auto inst = std::get<YagitInstance>(target_instance(Target::yagit, path));
                auto rep = check_instance(inst);
                if (!rep.ok()) throw InputError(path + ": " + rep.violations.front());
                auto r = tmc::solve(inst, yl);
                if (r.solution) sol = solution_json(*r.solution);
                if (r.status == YagitStatus::limit_exceeded) status = "limit-exceeded";
            } else {
                auto e = enumerate_target(need_target(), target_instance(need_target(), path), 1, lim.nodes);
                if (!e.empty()) sol = e[0];
            }
        } catch (const BudgetError& e) {
            status = "limit-exceeded";
            err_ << e.what() << "\n";
        }
        if (!sol.is_null()) status = "solved";
        emit(json{{"puzzle", p}, {"status", status}, {"solution", sol}});
        err_ << p << ": " << status << "\n";
        return sol.is_null() ? negative : ok;
    }

    static std::vector<json> enumerate_target(Target t, const TargetInstance& inst, long long cap, std::uint64_t nodes,
                                              bool* truncated = nullptr)
    {
        std::vector<json> out;
        auto take = [&](const auto& en) {
            for (auto& s : en.solutions) out.push_back(solution_json(s));
            if (truncated) *truncated = en.truncated;
        };
        switch (t) {
        case Target::grandtour: take(tmc::enumerate(std::get<GrandTourInstance>(inst), cap, nodes)); break;
        case Target::entryexit: take(tmc::enumerate(std::get<EntryExitInstance>(inst), cap, nodes)); break;
        case Target::zahlen: take(tmc::enumerate(std::get<ZahlenInstance>(inst), cap, nodes)); break;
        case Target::yagit: throw UnsupportedError("yagit has no enumerator; use solve");
        }
        return out;
    }

    int enumerate_cmd()
    {
        max_files(1);
        const std::string& p = need_puzzle();
        const std::string& path = file(0, "instance file");
        check_cap(o_.cap);
        Limits lim = limits();
        std::vector<json> sols;
        bool truncated = false;
        if (p == "tmetacell") {
            auto e = enumerate_cycles(metacell(path), o_.cap, lim.nodes);
            for (auto& c : e.solutions) sols.push_back(cycle_json(c));
            truncated = e.truncated;
        } else {
            Target t = need_target();
            sols = enumerate_target(t, target_instance(t, path), o_.cap, lim.nodes, &truncated);
        }
        emit(json{{"puzzle", p}, {"count", sols.size()}, {"truncated", truncated}, {"solutions", sols}});
        err_ << p << ": " << sols.size() << (truncated ? "+" : "") << " solutions\n";
        return sols.empty() ? negative : ok;
    }

    int validate_cmd()
    {
        max_files(2);
        const std::string& p = need_puzzle();
        const std::string& path = file(0, "instance file");
        bool with_solution = o_.files.size() > 1;
        Report rep;
        json extra = json::object();
        if (p == "tmetacell") {
            auto inst = load_file(path, [](const json& j) { return metacell_from_json(unwrap(j, "instance")); });
            rep = validate_instance(inst);
            if (with_solution && rep.ok()) rep = validate_cycle(inst, cycle(o_.files[1]));
        } else {
            Target t = need_target();
            auto inst = target_instance(t, path);
            if (with_solution) {
                rep = validate_target(inst, target_solution(t, o_.files[1]));
            } else if (t == Target::entryexit) {
                rep = check_regions(std::get<EntryExitInstance>(inst));
            } else if (t == Target::yagit) {
                rep = check_instance(std::get<YagitInstance>(inst));
            } else if (t == Target::grandtour) {
                auto b = forced_edge_bound_check(std::get<GrandTourInstance>(inst));
                extra["bound"] = bound_check_json(b);
                if (b.exceeds_cycle) rep.add("more forced edges than a Hamiltonian cycle has");
            }
        }
        json j = report_json(rep);
        j["puzzle"] = p;
        j["checked"] = with_solution ? "solution" : "instance";
        for (auto& [k, v] : extra.items()) j[k] = v;
        emit(j);
        for (auto& v : rep.violations) err_ << "violation: " << v << "\n";
        for (auto& w : rep.warnings) err_ << "warning: " << w << "\n";
        err_ << p << ": " << (rep.ok() ? "ok" : "invalid") << "\n";
        return rep.ok() ? ok : negative;
    }

    Gadget gadget(const std::string& name)
    {
        if (std::filesystem::exists(name)) return load_file(name, [](const json& j) { return gadget_from_json(j); });
        return builtin(name, o_.block_n);
    }

    int gadget_verify()
    {
        max_files(1);
        Gadget g = gadget(file(0, "gadget name or file"));
        VerifyOptions vo;
        if (Limits lim = limits(); lim.nodes) vo.node_budget = lim.nodes;
        auto rep = verify_gadget(g, vo);
        json j = report_json(rep);
        j["certified"] = rep.certified();
        emit(j);
        for (auto& p : rep.pairs)
            err_ << pair_label(p.a, p.b) << ": " << (p.feasible ? "feasible" : "infeasible") << "\n";
        for (auto& s : rep.spurious) err_ << "spurious: " << s << "\n";
        for (auto& n : rep.notes) err_ << "note: " << n << "\n";
        err_ << g.name << ": " << (rep.certified() ? "certified" : "not certified") << "\n";
        return rep.certified() ? ok : negative;
    }

    int reduce_cmd()
    {
        max_files(1);
        Target t = need_target();
        auto src = source(0);
        ReduceOptions ro;
        ro.block_n = o_.block_n;
        ro.closed = o_.closed;
        Reduction red = reduce(src, t, ro);
        json inst = target_instance_json(red.instance), trace = trace_json(red.trace);
        if (o_.out == "-") {
            emit(json{{"target", target_name(t)}, {"instance", inst}, {"trace", trace}});
        } else {
            // --out is a stem for the two documents
            std::string ip = o_.out + ".instance.json", tp = o_.out + ".trace.json";
            for (auto& [path, doc] : {std::pair{ip, inst}, std::pair{tp, trace}}) {
                std::ofstream f(path, std::ios::binary);
                if (!f) throw InputError(path + ": cannot write");
                f << doc.dump(2) << "\n";
            }
            out_ << json{{"target", target_name(t)}, {"instance", ip}, {"trace", tp}}.dump(2) << "\n";
        }
        Dims d = std::visit([](const auto& x) { return x.dims(); }, red.instance);
        err_ << target_name(t) << ": " << d.rows << "x" << d.cols << " target"
             << (red.trace.trivial_unsat ? " (source cannot have a cycle)" : "") << "\n";
        return ok;
    }

    ReductionTrace trace(const std::string& path)
    {
        return load_file(path, [](const json& j) { return trace_from_json(unwrap(j, "trace")); });
    }

    int lift_cmd()
    {
        max_files(2);
        auto tr = trace(file(0, "trace file"));
        auto c = cycle(file(1, "cycle file"));
        auto sol = lift(c, tr);
        emit(json{{"target", target_name(tr.target)}, {"solution", target_solution_json(sol)}});
        err_ << "lifted a " << c.edges.size() << "-edge cycle to " << target_name(tr.target) << "\n";
        return ok;
    }

    int extract_cmd()
    {
        max_files(2);
        auto tr = trace(file(0, "trace file"));
        auto sol = target_solution(tr.target, file(1, "solution file"));
        auto res = extract_detailed(sol, tr);
        emit(json{{"target", target_name(tr.target)},
                  {"cycle", cycle_json(res.cycle)},
                  {"replacements", res.replacements},
                  {"section_counts", res.section_counts}});
        err_ << "extracted a " << res.cycle.edges.size() << "-edge cycle";
        if (res.replacements) err_ << " after " << res.replacements << " replacements";
        err_ << "\n";
        return ok;
    }

    int audit_cmd()
    {
        max_files(1);
        Target t = need_target();
        auto src = source(0);
        AuditOptions ao;
        ao.cap = o_.cap;
        if (Limits lim = limits(); lim.nodes) ao.node_budget = lim.nodes;
        ao.reduce.block_n = o_.block_n;
        ao.reduce.closed = o_.closed;
        auto rep = audit_bijection(src, t, ao);
        json j = audit_json(rep);
        j["source"] = metacell_json(src);
        emit(j);
        err_ << target_name(t) << ": " << rep.source_count << (rep.source_truncated ? "+" : "") << " source cycles, "
             << rep.target_count << (rep.target_truncated ? "+" : "") << " target solutions, " << rep.verdict << "\n";
        for (auto& f : rep.findings) err_ << f.kind << ": " << f.detail << "\n";
        return rep.verdict == "mismatch" ? negative : ok;
    }

    int render_cmd()
    {
        max_files(2);
        auto fmt = parse_format(o_.format.empty() ? "ascii" : o_.format);
        if (!fmt) throw ArgumentError("--format must be json, ascii or svg");
        if (*fmt == Format::json) throw ArgumentError("render writes ascii or svg, not json");
        Picture pic;
        if (o_.puzzle.empty()) {
            max_files(1);
            pic = picture(gadget(file(0, "gadget name or file")));
        } else if (o_.puzzle == "tmetacell") {
            auto inst = metacell(file(0, "instance file"));
            std::optional<MetacellCycle> c;
            if (o_.files.size() > 1) c = cycle(o_.files[1]);
            pic = picture(inst, c ? &*c : nullptr);
        } else {
            Target t = need_target();
            auto inst = target_instance(t, file(0, "instance file"));
            std::optional<TargetSolution> sol;
            if (o_.files.size() > 1) sol = target_solution(t, o_.files[1]);
            pic = target_picture(inst, sol);
        }
        emit_text(render(pic, *fmt));
        err_ << "rendered " << pic.rows << "x" << pic.cols << " " << (*fmt == Format::svg ? "svg" : "ascii") << "\n";
        return ok;
    }

    static Picture target_picture(const TargetInstance& inst, const std::optional<TargetSolution>& sol)
    {
        auto pick = [&](auto* none) { return sol ? &std::get<std::remove_cv_t<std::remove_pointer_t<decltype(none)>>>(*sol) : none; };
        switch (inst.index()) {
        case 0: return picture(std::get<0>(inst), pick(static_cast<const GrandTourSolution*>(nullptr)));
        case 1: return picture(std::get<1>(inst), pick(static_cast<const CellLoop*>(nullptr)));
        case 2: return picture(std::get<2>(inst), pick(static_cast<const YagitSolution*>(nullptr)));
        default: return picture(std::get<3>(inst), pick(static_cast<const CellPath*>(nullptr)));
        }
    }
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"T-metacell reductions: puzzle solvers, gadget checks, reduce/lift/extract, audits"};
    app.name("tmc");
    app.require_subcommand(1, 1);
    Options o;
    const std::vector<std::string> puzzles{"grandtour", "entryexit", "yagit", "zahlen", "tmetacell"};

    struct Spec {
        const char* name;
        const char* help;
        const char* files;
    };
    const Spec specs[] = {
        {"solve", "find one solution", "INSTANCE"},
        {"enumerate", "list solutions up to --cap", "INSTANCE"},
        {"validate", "check an instance, or a solution against it", "INSTANCE [SOLUTION]"},
        {"gadget-verify", "verify a gadget from the atlas or a file", "GADGET"},
        {"reduce", "reduce a T-metacell source to a target puzzle", "[SOURCE]"},
        {"lift", "map a source cycle to a target solution", "TRACE CYCLE"},
        {"extract", "map a target solution back to a source cycle", "TRACE SOLUTION"},
        {"audit", "compare source cycles with target solutions", "[SOURCE]"},
        {"render", "draw an instance (and solution) or a gadget", "INSTANCE [SOLUTION] | GADGET"},
    };
    for (const Spec& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("files", o.files, s.files);
        sub->add_option("--puzzle", o.puzzle, "puzzle kind")->check(CLI::IsMember(puzzles));
        sub->add_option("--cap", o.cap, "solution cap");
        sub->add_option("--block-n", o.block_n, "block index (gadget size 4n+1, or the zahlen n)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", o.seed, "random source seed");
        sub->add_option("--size", o.size, "random source size RxC");
        sub->add_flag("--forced", o.forced, "random source with a forced exit in every cell");
        sub->add_flag("--closed", o.closed, "closed zahlen variant");
        sub->add_option("--limits", o.limits, "nodes=K,lines=L");
        sub->add_option("--format", o.format, "json|ascii|svg")->check(CLI::IsMember({"json", "ascii", "svg"}));
        sub->add_option("--out", o.out, "output path, - for stdout");
        sub->callback([&o, sub] { o.command = sub->get_name(); });
    }

    std::vector<const char*> argv{"tmc"};
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }
    try {
        return Runner(o, out, err).dispatch();
    } catch (const ArgumentError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const LookupError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
    } catch (const BudgetError& e) {
        err << "limit exceeded: " << e.what() << "\n";
        return negative;
    } catch (const ExtractionError& e) {
        err << "extraction failed: " << e.what() << "\n";
        return negative;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << "\n";
    }
    return usage;
}

} // namespace tmc::cli
