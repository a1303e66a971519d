#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tmc/grandtour.hpp"

using namespace tmc;

namespace {

json load(const std::string& name)
{
    std::ifstream in(std::string(TMC_SAMPLES_DIR) + "/" + name);
    return json::parse(in);
}

EdgeSet unit_square()
{
    return {Edge({0, 0}, {0, 1}), Edge({0, 1}, {1, 1}), Edge({1, 1}, {1, 0}), Edge({1, 0}, {0, 0})};
}

} // namespace

TEST(GrandTour, DrawnSampleSolves)
{
    auto inst = grandtour_from_json(load("grandtour_6x6.instance.json"));
    auto drawn = grandtour_solution_from_json(load("grandtour_6x6.solution.json"));
    auto rep = validate(inst, drawn);
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations[0]);
    auto all = enumerate(inst, 1000);
    EXPECT_FALSE(all.truncated);
    EXPECT_EQ(all.solutions.size(), oracle::tours(inst).size());
    if (all.solutions.size() == 1) {
        EXPECT_EQ(*solve(inst), drawn);
    }
    // drawn loop must be among the solver's
    EXPECT_NE(std::find(all.solutions.begin(), all.solutions.end(), drawn), all.solutions.end());
}

TEST(GrandTour, ValidateReportsSeparately)
{
    GrandTourInstance sq{2, 2, {}};
    EXPECT_TRUE(validate(sq, {unit_square()}).ok());

    auto inst = grandtour_from_json(load("grandtour_6x6.instance.json"));
    auto drawn = grandtour_solution_from_json(load("grandtour_6x6.solution.json"));
    auto cut = drawn;
    cut.loop.erase(cut.loop.begin());
    auto rep = validate(inst, cut);
    int degree_msgs = 0;
    for (auto& v : rep.violations) degree_msgs += v.find("has degree 1") != std::string::npos;
    EXPECT_EQ(degree_msgs, 2);

    GrandTourSolution partial{{Edge({0, 0}, {0, 1})}};
    rep = validate(GrandTourInstance{2, 2, {Edge({1, 0}, {1, 1})}}, partial);
    bool uncovered = false, unused = false;
    for (auto& v : rep.violations) {
        uncovered |= v.find("uncovered vertices") != std::string::npos;
        unused |= v.find("forced edge") != std::string::npos;
    }
    EXPECT_TRUE(uncovered);
    EXPECT_TRUE(unused);

    GrandTourInstance wide{2, 5, {}};
    EdgeSet two = unit_square();
    for (auto& e : unit_square()) two.insert(offset(e, {0, 3}));
    two.insert(Edge({0, 2}, {1, 2}));
    rep = validate(wide, {two});
    bool disconnected = false;
    for (auto& v : rep.violations) disconnected |= v.find("disconnected") != std::string::npos;
    EXPECT_TRUE(disconnected);
}

TEST(GrandTour, SolveExamples)
{
    GrandTourInstance ladder{2, 3, {Edge({0, 0}, {1, 0}), Edge({0, 2}, {1, 2})}};
    auto s = solve(ladder);
    ASSERT_TRUE(s);
    EXPECT_EQ(std::set<EdgeSet>{s->loop}, oracle::tours(ladder));
    EXPECT_FALSE(solve(GrandTourInstance{3, 3, {}}));
    EXPECT_EQ(enumerate(GrandTourInstance{2, 2, {}}, 5).solutions.size(), 1u);
    EXPECT_TRUE(enumerate(GrandTourInstance{3, 3, {}}, 5).solutions.empty());
    EXPECT_THROW(enumerate(GrandTourInstance{2, 2, {}}, 0), ArgumentError);
}

// every vertex grid up to 4x4 with random forced subsets, against DFS cycle enumeration
TEST(GrandTour, OracleEquivalence)
{
    std::mt19937 rng(5);
    for (int R = 1; R <= 4; ++R)
        for (int C = 1; C <= 4; ++C) {
            GrandTourInstance bare{R, C, {}};
            auto want = oracle::tours(bare);
            auto got = enumerate(bare, 100000);
            EXPECT_EQ(got.solutions.size(), want.size()) << R << "x" << C;
            std::set<EdgeSet> gs;
            for (auto& s : got.solutions) {
                gs.insert(s.loop);
                EXPECT_TRUE(validate(bare, s).ok());
            }
            EXPECT_EQ(gs, want);
            auto edges = grid_edges(bare.dims());
            for (int t = 0; t < 20 && !edges.empty(); ++t) {
                GrandTourInstance inst{R, C, {}};
                for (auto& e : edges)
                    if (rng() % 5 == 0) inst.forced.insert(e);
                std::set<EdgeSet> g2;
                for (auto& s : enumerate(inst, 100000).solutions) g2.insert(s.loop);
                EXPECT_EQ(g2, oracle::tours(inst));
            }
        }
}

TEST(GrandTour, ForcedBoundReadings)
{
    GrandTourInstance full{2, 2, unit_square()};
    auto r = forced_edge_bound_check(full);
    EXPECT_TRUE(r.applicable);
    EXPECT_EQ(r.side_limit, 4);
    EXPECT_FALSE(r.exceeds_side);
    EXPECT_FALSE(r.exceeds_cycle);
    EXPECT_EQ(enumerate(full, 5).solutions.size(), 1u);

    // a 2x2 vertex grid only has 4 edges, so five forced edges are checked by count
    auto five = forced_edge_bound_check(2, 2, 5);
    EXPECT_TRUE(five.exceeds_side);
    EXPECT_TRUE(five.exceeds_cycle);
    EXPECT_FALSE(five.exceeds_vertex);

    EXPECT_FALSE(forced_edge_bound_check(GrandTourInstance{2, 3, {}}).applicable);
    EXPECT_EQ(bound_check_json(forced_edge_bound_check(GrandTourInstance{2, 3, {}}))["result"], "not applicable");

    // sweep: the largest forced set any tour can honour is the tour itself
    for (int n = 2; n <= 4; ++n) {
        size_t best = 0;
        for (auto& c : oracle::hamiltonian_cycles({n, n}, grid_edges({n, n}))) best = std::max(best, c.size());
        auto chk = forced_edge_bound_check(GrandTourInstance{n, n, {}});
        EXPECT_EQ(static_cast<int>(best), n % 2 == 0 ? chk.cycle_limit : 0);
        // the side-length reading coincides with the true maximum only for n = 2
        EXPECT_EQ(static_cast<int>(best) == chk.side_limit, n == 2);
    }
}

TEST(GrandTour, JsonRoundTrip)
{
    auto inst = grandtour_from_json(load("grandtour_6x6.instance.json"));
    EXPECT_EQ(grandtour_from_json(grandtour_json(inst)), inst);
    auto drawn = grandtour_solution_from_json(load("grandtour_6x6.solution.json"));
    EXPECT_EQ(grandtour_solution_from_json(solution_json(drawn)), drawn);
    EXPECT_THROW(grandtour_from_json(json::parse(R"({"vrows":2,"vcols":2,"forced":[[[0,0],[1,1]]]})")), InputError);
    EXPECT_THROW(grandtour_from_json(json::parse(R"({"vrows":2,"forced":[]})")), InputError);
}
