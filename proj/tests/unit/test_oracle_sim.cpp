#include <doctest.h>

#include "treepull/oracle_sim.hpp"

using namespace treepull;

namespace {

FiniteTree base() { return FiniteTree::closure_of({GString{0, 0}, GString{1, 0}}); }

}  // namespace

TEST_CASE("staged tree queries follow flips") {
    StagedTree t(base(), 0, {{7, GString{1, 0}, false}, {12, GString{1, 0}, true}});
    CHECK(t.query(GString{1, 0}, 6));
    CHECK_FALSE(t.query(GString{1, 0}, 7));
    CHECK_FALSE(t.query(GString{1, 0}, 8));
    CHECK(t.query(GString{1, 0}, 12));
    CHECK(t.limit(GString{1, 0}));
    CHECK(t.slice(9).size() == 4);
    CHECK(t.flip_stages() == std::vector<Stage>{7, 12});
    CHECK(t.frozen_prefix().size() == 1);
}

TEST_CASE("staged tree validation") {
    CHECK_THROWS_AS(StagedTree(base(), 1, {{3, GString{1}, false}}), FixtureError);
    // dropping a parent while its child stays in breaks downward closure
    CHECK_THROWS_AS(StagedTree(base(), 0, {{3, GString{1}, false}}), FixtureError);
    CHECK_NOTHROW(StagedTree(base(), 0, {{3, GString{1}, false}, {3, GString{1, 0}, false}}));
    CHECK_THROWS_AS(StagedTree(base(), 0, {{3, GString{2, 0}, true}}), FixtureError);
}

TEST_CASE("attention gate only moves on attention") {
    StagedTree t(base(), 0, {{5, GString{1, 0}, false}, {9, GString{1, 0}, true}});
    AttentionGate g(&t);
    CHECK(g.query(GString{1, 0}, 6));
    CHECK(g.pending(6).size() == 1);
    CHECK_FALSE(g.attend(GString{1, 0}, 6));
    CHECK_FALSE(g.query(GString{1, 0}, 8));
    CHECK(g.query(GString{1, 0}, 5));
    CHECK_FALSE(g.appears_enter(GString{1, 0}, 8));
    CHECK(g.attend(GString{1, 0}, 11));
    CHECK(g.appears_enter(GString{1, 0}, 20) == Stage{11});
    CHECK(g.appears_enter(GString{0, 0}, 20) == Stage{0});
    CHECK(g.history().at(GString{1, 0}).size() == 3);
}

TEST_CASE("enumeration fixtures") {
    EnumFixture empty;
    CHECK(empty.enumerated(100).empty());
    EnumFixture w({{3, GString{5}}, {8, GString{6}}, {3, GString{5}}});
    CHECK(w.enumerated(2).empty());
    CHECK(w.enumerated(3) == std::set<GString>{GString{5}});
    CHECK(w.contains(GString{6}, 8));
    CHECK_FALSE(w.contains(GString{6}, 7));
    CHECK(w.entry_stage(GString{5}) == Stage{3});
    CHECK(w.events().size() == 2);
}

TEST_CASE("staged functionals") {
    StagedFunctional empty;
    CHECK(empty.eval(GString{1, 2}, 100) == GString{});
    StagedFunctional phi({{1, GString{0}, GString{4}}, {6, GString{0, 1}, GString{4, 2}}});
    CHECK(phi.eval(GString{0, 9}, 1) == GString{4});
    CHECK(phi.eval(GString{0, 1, 3}, 5) == GString{4});
    CHECK(phi.eval(GString{0, 1, 3}, 6) == GString{4, 2});
    CHECK(phi.eval(GString{1}, 6) == GString{});
    CHECK(phi.eval_limit(GString{0, 1}) == GString{4, 2});
    CHECK(phi.settle_stage(GString{0, 1}) == 6);
    CHECK_THROWS_AS(StagedFunctional({{1, GString{0}, GString{4}}, {2, GString{0, 0}, GString{5}}}), FixtureError);
    CHECK_THROWS_AS(StagedFunctional({{1, GString{0}, GString{4}}, {2, GString{0}, GString{3, 1}}}), FixtureError);
}
