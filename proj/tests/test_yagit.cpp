#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "tmc/yagit.hpp"

using namespace tmc;

namespace {

json load(const std::string& name)
{
    std::ifstream in(std::string(TMC_SAMPLES_DIR) + "/" + name);
    return json::parse(in);
}

json load_gadget(const std::string& name)
{
    std::ifstream in(std::string(TMC_SAMPLES_DIR) + "/../gadgets/" + name + ".json");
    return json::parse(in);
}

YagitInstance make(std::vector<std::string> rows, std::set<Coord> dots = {})
{
    YagitInstance y;
    y.rows = static_cast<int>(rows.size());
    y.cols = static_cast<int>(rows[0].size());
    for (auto& r : rows)
        for (char ch : r) y.animals.push_back(ch == 'S' ? Animal::sheep : ch == 'W' ? Animal::wolf : Animal::none);
    y.dots = std::move(dots);
    return y;
}

// flood fill on the doubled grid: cells at odd/odd, lattice points at even/even, walls drawn by the lines
std::vector<int> flood_oracle(const YagitInstance& inst, const std::vector<PartitionLine>& lines)
{
    int H = 2 * inst.rows + 1, W = 2 * inst.cols + 1;
    std::vector<bool> wall(H * W, false);
    for (auto& l : lines)
        for (size_t i = 0; i + 1 < l.points.size(); ++i) {
            Coord a = l.points[i], b = l.points[i + 1];
            wall[(a.row + b.row) * W + (a.col + b.col)] = true;
        }
    std::vector<int> label(H * W, -1), out;
    int next = 0;
    for (int r = 1; r < H; r += 2)
        for (int c = 1; c < W; c += 2) {
            if (label[r * W + c] < 0) {
                std::vector<std::pair<int, int>> st{{r, c}};
                label[r * W + c] = next;
                while (!st.empty()) {
                    auto [y, x] = st.back();
                    st.pop_back();
                    int dy[] = {-1, 0, 1, 0}, dx[] = {0, 1, 0, -1};
                    for (int k = 0; k < 4; ++k) {
                        int wy = y + dy[k], wx = x + dx[k], ny = y + 2 * dy[k], nx = x + 2 * dx[k];
                        if (ny < 1 || nx < 1 || ny >= H || nx >= W || wall[wy * W + wx] || label[ny * W + nx] >= 0) continue;
                        label[ny * W + nx] = next;
                        st.push_back({ny, nx});
                    }
                }
                ++next;
            }
            out.push_back(label[r * W + c]);
        }
    return out;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    return true;
}

// all trails from the border through the interior back to the border, any direction at every step,
// kept when the validator accepts them as single lines
std::vector<PartitionLine> oracle_lines(const YagitInstance& inst)
{
    std::set<PartitionLine> out;
    Dims lat = inst.lattice();
    std::vector<Coord> path;
    std::set<Edge> used;
    std::function<void()> go = [&] {
        Coord p = path.back();
        if (path.size() > 1 && inst.on_border(p)) {
            PartitionLine l{path};
            if (!line_problem(inst, l, 0)) {
                PartitionLine r{{path.rbegin(), path.rend()}};
                out.insert(std::min(l, r));
            }
            return;
        }
        for (Dir d : kDirs) {
            Coord q = step(p, d);
            if (!lat.contains(q) || used.count(Edge(p, q))) continue;
            if (path.size() == 1 && inst.on_border(q)) continue;
            used.insert(Edge(p, q));
            path.push_back(q);
            go();
            path.pop_back();
            used.erase(Edge(p, q));
        }
    };
    for (int r = 0; r < lat.rows; ++r)
        for (int c = 0; c < lat.cols; ++c)
            if (inst.on_border({r, c})) {
                path = {{r, c}};
                go();
            }
    return {out.begin(), out.end()};
}

bool oracle_sat(const YagitInstance& inst, int max_lines)
{
    auto lines = oracle_lines(inst);
    std::vector<PartitionLine> pick;
    std::function<bool(size_t)> go = [&](size_t from) {
        if (validate(inst, {pick}).ok()) return true;
        if (static_cast<int>(pick.size()) == max_lines) return false;
        for (size_t k = from; k < lines.size(); ++k) {
            pick.push_back(lines[k]);
            if (go(k + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return go(0);
}

YagitInstance random_instance(std::mt19937& rng, int R, int C)
{
    YagitInstance y;
    y.rows = R;
    y.cols = C;
    for (int i = 0; i < R * C; ++i) {
        int k = rng() % 3;
        y.animals.push_back(k == 0 ? Animal::none : k == 1 ? Animal::sheep : Animal::wolf);
    }
    for (int r = 1; r < R; ++r)
        for (int c = 1; c < C; ++c)
            if (rng() % 3 == 0) y.dots.insert({r, c});
    return y;
}

EdgeSet all_segments(const std::vector<PartitionLine>& lines)
{
    EdgeSet out;
    for (auto& l : lines)
        for (auto& e : line_segments(l)) out.insert(e);
    return out;
}

} // namespace

TEST(Yagit, DrawnSample)
{
    auto inst = yagit_from_json(load("yagit_6x6.instance.json"));
    auto drawn = yagit_solution_from_json(load("yagit_6x6.solution.json"));
    auto rep = validate(inst, drawn);
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations[0]);
    auto reg = compute_regions(inst, drawn.lines);
    EXPECT_TRUE(same_partition(reg.region_of, flood_oracle(inst, drawn.lines)));
    auto an = region_animals(inst, reg);
    for (auto [s, w] : an) EXPECT_TRUE(s != w);

    auto res = solve(inst, {8, 5000000});
    ASSERT_EQ(res.status, YagitStatus::solved);
    EXPECT_TRUE(validate(inst, *res.solution).ok());
}

TEST(Yagit, SmallExamples)
{
    auto pair = make({"SW"});
    EXPECT_EQ(compute_regions(pair, {}).count, 1);
    PartitionLine mid{{{0, 1}, {1, 1}}};
    EXPECT_EQ(compute_regions(pair, {mid}).count, 2);
    EXPECT_TRUE(validate(pair, {{mid}}).ok());
    auto rep = validate(pair, {{PartitionLine{{{0, 1}, {1, 1}, {1, 2}}}}});
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations[0].find("illegal turn"), std::string::npos);
    EXPECT_THROW(compute_regions(pair, {PartitionLine{{{0, 1}, {1, 1}, {1, 2}}}}), GeometryError);

    auto res = solve(pair);
    ASSERT_EQ(res.status, YagitStatus::solved);
    ASSERT_EQ(res.solution->lines.size(), 1u);
    EXPECT_EQ(line_segments(res.solution->lines[0]), line_segments(mid));

    auto one = make({"S"});
    res = solve(one);
    ASSERT_EQ(res.status, YagitStatus::solved);
    EXPECT_TRUE(res.solution->lines.empty());

    EXPECT_EQ(solve(make({"."})).status, YagitStatus::unsat);
    EXPECT_TRUE(validate(make({"SS", ".."}), {}).ok());
    EXPECT_FALSE(validate(make({"S."}), {{mid}}).ok()); // empty region

    // two lines meeting at a dot
    auto cross = make({"SW", "WS"}, {{1, 1}});
    PartitionLine h{{{1, 0}, {1, 1}, {1, 2}}}, v{{{0, 1}, {1, 1}, {2, 1}}};
    rep = validate(cross, {{h, v}});
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations[0].find("meet at dot"), std::string::npos);
    auto open = make({"SW", "WS"});
    EXPECT_TRUE(validate(open, {{h, v}}).ok());
}

TEST(Yagit, RegionsMatchFloodFill)
{
    std::mt19937 rng(23);
    int checked = 0;
    for (int t = 0; t < 500; ++t) {
        auto inst = random_instance(rng, 2 + rng() % 4, 2 + rng() % 4);
        auto cands = candidate_lines(inst);
        std::vector<PartitionLine> pick;
        for (auto& l : cands)
            if (rng() % 4 == 0) pick.push_back(l);
        auto got = compute_regions(inst, pick);
        auto want = flood_oracle(inst, pick);
        EXPECT_TRUE(same_partition(got.region_of, want));
        EXPECT_EQ(got.count, *std::max_element(want.begin(), want.end()) + 1);
        ++checked;
    }
    EXPECT_EQ(checked, 500);
}

TEST(Yagit, CandidatesMatchTrailOracle)
{
    std::mt19937 rng(29);
    for (int t = 0; t < 40; ++t) {
        auto inst = random_instance(rng, 2 + rng() % 2, 2 + rng() % 3);
        EXPECT_EQ(candidate_lines(inst), oracle_lines(inst));
    }
}

TEST(Yagit, SolverMatchesExhaustiveSearch)
{
    std::mt19937 rng(31);
    int sat = 0, unsat = 0;
    for (int t = 0; t < 60; ++t) {
        auto inst = random_instance(rng, 2 + rng() % 2, 2 + rng() % 2);
        auto res = solve(inst, {3, 10000000});
        bool want = oracle_sat(inst, 3);
        EXPECT_EQ(res.status == YagitStatus::solved, want);
        if (res.solution) {
            EXPECT_TRUE(validate(inst, *res.solution).ok());
        }
        want ? ++sat : ++unsat;
    }
    EXPECT_GT(sat, 5);
    EXPECT_GT(unsat, 5);
}

TEST(Yagit, LimitExceededIsDistinct)
{
    auto inst = yagit_from_json(load("yagit_6x6.instance.json"));
    EXPECT_EQ(solve(inst, {8, 3}).status, YagitStatus::limit_exceeded);
    EXPECT_EQ(solve(inst, {1, 5000000}).status, YagitStatus::limit_exceeded);
}

TEST(Yagit, TraversalPatterns)
{
    auto g = load_gadget("yagit3");
    for (auto k : {TraversalType::a, TraversalType::b, TraversalType::c})
        EXPECT_EQ(traversal_pattern(k), jsonio::as_edge_set(g["traversals"][traversal_name(k)], "$"));
    for (auto& t : all_transforms())
        for (auto k : {TraversalType::a, TraversalType::b, TraversalType::c}) {
            EdgeSet placed = apply_transform(t, traversal_pattern(k), {4, 4});
            EXPECT_EQ(classify_block_segments(placed, t), k) << to_string(t);
            // the untransformed reading differs unless the transform fixes the pattern
            if (placed != traversal_pattern(k)) {
                EXPECT_NE(classify_block_segments(placed, {}), k);
            }
        }
    EdgeSet broken = traversal_pattern(TraversalType::a);
    broken.erase(broken.begin());
    EXPECT_EQ(classify_block_segments(broken, {}), TraversalType::invalid);

    // a block placed inside a bigger grid, with strands continuing outside
    YagitInstance big = make({".......", ".......", ".......", ".......", ".......", "......."});
    D4Transform t = make_transform(1, true);
    Coord origin{2, 3};
    std::vector<PartitionLine> lines;
    EdgeSet segs;
    for (auto& e : apply_transform(t, traversal_pattern(TraversalType::b), {4, 4})) segs.insert(offset(e, origin));
    segs.insert(Edge({0, 0}, {0, 1}));
    for (auto& e : segs) lines.push_back({{e.a, e.b}});
    EXPECT_EQ(classify_block_traversal(big, lines, origin, t), TraversalType::b);
    EXPECT_THROW(classify_block_traversal(big, lines, origin, std::nullopt), ArgumentError);
}

TEST(Yagit, AssembleLines)
{
    auto inst = yagit_from_json(load("yagit_6x6.instance.json"));
    auto drawn = yagit_solution_from_json(load("yagit_6x6.solution.json"));
    auto lines = assemble_lines(inst, all_segments(drawn.lines));
    EXPECT_EQ(all_segments(lines), all_segments(drawn.lines));
    EXPECT_EQ(lines.size(), drawn.lines.size());
    EXPECT_TRUE(validate(inst, {lines}).ok());
    EdgeSet dangling{Edge({0, 1}, {1, 1}), Edge({1, 1}, {1, 2})};
    EXPECT_THROW(assemble_lines(inst, dangling), GeometryError);
}

TEST(Yagit, JsonRoundTrip)
{
    auto inst = yagit_from_json(load("yagit_6x6.instance.json"));
    EXPECT_EQ(yagit_from_json(yagit_json(inst)), inst);
    auto drawn = yagit_solution_from_json(load("yagit_6x6.solution.json"));
    EXPECT_EQ(yagit_solution_from_json(solution_json(drawn)), drawn);
    EXPECT_THROW(yagit_from_json(json::parse(R"({"rows":1,"cols":1,"animals":[["X"]],"dots":[]})")), InputError);
    EXPECT_THROW(yagit_from_json(json::parse(R"({"rows":2,"cols":2,"animals":[[".","."],[".","."]],"dots":[[0,1]]})")),
                 InputError);
}
