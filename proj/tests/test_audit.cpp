#include <gtest/gtest.h>

#include "tmc/audit.hpp"

using namespace tmc;

namespace {

bool has_finding(const AuditReport& r, const std::string& kind)
{
    return std::any_of(r.findings.begin(), r.findings.end(), [&](const AuditFinding& f) { return f.kind == kind; });
}

AuditOptions capped(long long cap)
{
    AuditOptions o;
    o.cap = cap;
    return o;
}

} // namespace

TEST(Audit, ForcedSourcesAreBijective)
{
    for (int seed = 1; seed <= 6; ++seed)
        for (Target t : {Target::grandtour, Target::zahlen, Target::yagit}) {
            auto src = random_instance(seed, 2, 2, true);
            auto r = audit_bijection(src, t, capped(50));
            SCOPED_TRACE(std::to_string(seed) + " " + target_name(t));
            EXPECT_EQ(r.verdict, "bijective");
            EXPECT_EQ(r.source_count, r.target_count);
            EXPECT_TRUE(r.findings.empty());
            for (int m : r.mapping) EXPECT_GE(m, 0);
        }
}

TEST(Audit, EntryExitIsManyToOne)
{
    auto src = random_instance(1, 2, 2, true);
    auto r = audit_bijection(src, Target::entryexit, capped(30));
    EXPECT_TRUE(r.extract_total);
    EXPECT_TRUE(r.surjective);
    EXPECT_FALSE(r.injective);
    EXPECT_TRUE(r.target_truncated);
    EXPECT_EQ(r.target_count, 30);
    EXPECT_EQ(r.verdict, "surjective-only");
    EXPECT_TRUE(has_finding(r, "non-injective"));
    EXPECT_TRUE(has_finding(r, "truncated"));
}

TEST(Audit, UnforcedGrandTourSourceIsNotParsimonious)
{
    // seed 3 has unforced cells whose gt5 block offers two completions
    auto src = random_instance(3, 2, 2, false);
    auto r = audit_bijection(src, Target::grandtour, capped(50));
    EXPECT_EQ(r.source_count, 1);
    EXPECT_GT(r.target_count, 1);
    EXPECT_EQ(r.verdict, "surjective-only");
    EXPECT_TRUE(has_finding(r, "non-injective"));
}

TEST(Audit, SourceWithoutCycles)
{
    auto src = random_instance(1, 2, 2, true);
    MetacellSpec s;
    s.exits = {true, true, false, true}; // no way down from the corner
    s.forced = Dir::right;
    src.cells[0] = s;
    ASSERT_TRUE(validate_instance(src).ok());
    for (Target t : {Target::grandtour, Target::zahlen, Target::yagit}) {
        auto r = audit_bijection(src, t, capped(20));
        SCOPED_TRACE(target_name(t));
        EXPECT_EQ(r.source_count, 0);
        EXPECT_EQ(r.target_count, 0);
        EXPECT_EQ(r.verdict, "bijective");
    }
    // the Entry-Exit search cannot refute its target within a small budget
    auto o = capped(20);
    o.node_budget = 100000;
    auto r = audit_bijection(src, Target::entryexit, o);
    EXPECT_EQ(r.source_count, 0);
    EXPECT_EQ(r.target_count, 0);
    EXPECT_TRUE(has_finding(r, "target-budget"));
    EXPECT_EQ(r.verdict, "inconclusive");
}

TEST(Audit, JsonIsStable)
{
    auto src = random_instance(2, 2, 3, true);
    auto a = audit_json(audit_bijection(src, Target::zahlen, capped(20)));
    auto b = audit_json(audit_bijection(src, Target::zahlen, capped(20)));
    EXPECT_EQ(a.dump(), b.dump());
    for (const char* k : {"target", "source_count", "target_count", "mapping", "extract_total", "surjective",
                          "injective", "verdict", "findings"})
        EXPECT_TRUE(a.contains(k)) << k;
    EXPECT_EQ(a["target"], "zahlen");
}

TEST(Audit, RejectsBadArguments)
{
    auto src = random_instance(1, 2, 2, true);
    EXPECT_THROW(audit_bijection(src, Target::grandtour, capped(0)), ArgumentError);
    auto bad = src;
    bad.cells[0].forced = Dir::up; // forced off the board
    EXPECT_THROW(audit_bijection(bad, Target::grandtour), InputError);
}
