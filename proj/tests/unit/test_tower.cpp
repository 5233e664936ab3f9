#include <doctest.h>

#include "../criteria.hpp"
#include "treepull/tower.hpp"

using namespace treepull;

namespace {

FiniteTree eps_u() { return FiniteTree::closure_of({GString{}}); }

FiniteTree top20() { return nice_closure(two_path(20), 20); }

std::size_t fails(const criteria::Tally& t) { return t.failures.size(); }

}  // namespace

TEST_CASE("copy lengths") {
    FiniteTree u = FiniteTree::closure_of({GString{0}});
    CHECK(copy_len(u, GString{}) == 0);
    CHECK(copy_len(u, GString{2}) == 12);
    CHECK(copy_len(u, GString{0, 1}) == 12);
    CHECK_THROWS_AS(copy_len(u, GString{1, 1}), std::invalid_argument);
    CHECK(copy_len_pair(u, GString{1}, GString{0}) == 4);
    CHECK(copy_len_pair(u, GString{0}, GString{0, 2}) == 16);
    CHECK(copy_len_pair(u, GString{}, GString{3}) == 16);
    CHECK(copy_len_pair(u, GString{2}, GString{0, 5}) == 4);
    CHECK_THROWS_AS(copy_len_pair(u, GString{0}, GString{1}), std::invalid_argument);
}

TEST_CASE("copy lengths match the closed form and are acceptable") {
    for (const auto& raw : oracle::all_trees(2, 2)) {
        auto t = criteria::copy_lengths(oracle::to_tree(raw), 2, true);
        INFO(criteria::describe(raw));
        CHECK(fails(t) == 0);
    }
    auto w2 = notation_to_tree(catalog::omega_times(2), 50).tree;
    CHECK(fails(criteria::copy_lengths(w2, 3, true)) == 0);
    CHECK(fails(criteria::copy_lengths(w2, 3, false)) == 0);
}

TEST_CASE("acceptability checker") {
    auto table = copy_len_table(FiniteTree::closure_of({GString{0}}), 3);
    auto ok = check_acceptable(table);
    CHECK(ok.fail == 0);
    CHECK(ok.pass > 0);

    auto lowered = table;
    lowered.l_pair[{GString{1}, GString{0, 1}}] = 0;
    auto bad = check_acceptable(lowered);
    CHECK(bad.fail > 0);
    REQUIRE_FALSE(bad.messages.empty());
    CHECK(bad.messages.front().find("quadruple") != std::string::npos);

    auto single = copy_len_table(eps_u(), 0);
    CHECK(check_acceptable(single).fail == 0);
}

TEST_CASE("uniformize examples") {
    FiniteTree t = nice_closure(full_binary(8), 8);
    Uniformized plain(tree_evaluator(t), {{4, 8}, {}});
    for (const auto& s : full_binary(8).members()) CHECK(plain.contains(s) == t.contains(s));
    CHECK(plain.lazy(1).materialize() == t);

    const GString s0{1, 0};
    Evaluator late = [&](const GString& s) {
        Evaluation e;
        if (s == s0) {
            e.accept = false;
            e.use_column = 3;
        }
        return e;
    };
    Uniformized u(late, {{4, 8, 12, 16}, {}});
    CHECK(u.contains_at(s0, 2));
    CHECK_FALSE(u.contains_at(s0, 3));
    CHECK(u.contains(s0));
    CHECK(u.contains(GString{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK_FALSE(u.contains(GString{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK(u.level_of(GString{1, 0, 0, 0, 0}) == 1);
    CHECK_THROWS_AS(u.level_of(GString(std::vector<Nat>(17, 0))), BudgetExceeded);

    Evaluator slow = [](const GString& s) {
        Evaluation e;
        e.accept = s != GString{0};
        e.steps = 10;
        return e;
    };
    Uniformized steps(slow, {{4, 8, 12}, {}});
    CHECK(steps.contains_at(GString{0}, 1));
    CHECK_FALSE(steps.contains_at(GString{0}, 2));

    // a rejected level-3 string stays; its extensions go
    Evaluator third = [](const GString& s) {
        Evaluation e;
        e.accept = s != GString{0, 0, 1};
        return e;
    };
    Uniformized nice(third, {{8}, {}});
    CHECK(nice.contains(GString{0, 0, 1}));
    CHECK_FALSE(nice.contains(GString{0, 0, 1, 0}));
    CHECK_FALSE(nice.contains(GString{0, 0, 2}));

    CHECK_THROWS_AS(Uniformized(late, {{4, 4}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(Uniformized(late, {{4, 8}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(Uniformized(late, {{4}, {}}, FrozenPrefix{4, eps_u()}), std::invalid_argument);
}

TEST_CASE("uniformize properties under column perturbation") {
    auto t = criteria::uniformize_properties({{3, 5, 7, 8}, {}}, 1);
    const std::string first = t.first();
    INFO(first);
    CHECK(t.ok());
    CHECK(t.checked > 1000);
}

TEST_CASE("height 1 tower is a single pulldown") {
    auto top = top20();
    auto b = build_tower_height(1, top);
    REQUIRE(b.order == std::vector<GString>{GString{0}, GString{}});
    const auto& lv = b.level(GString{0});
    CHECK(lv.copy_len == 4);
    PulldownScenario sc;
    sc.l = 4;
    sc.tprime = StagedTree(top.restrict(b.depth), 4, {});
    sc.depth = b.depth;
    auto r = run_pulldown(sc);
    CHECK(lv.gamma_up == r.final_gamma);
    CHECK(lv.tree == r.final_tree);
    for (const auto& m : top.restrict(4).members()) CHECK(lv.gamma_up.at(m) == m);
    CHECK(tower_gamma(b, GString{}, GString{0}, GString{0, 0}) == r.final_gamma.at(GString{0, 0}));
    CHECK(tower_gamma(b, GString{0}, GString{0}, GString{7}) == GString{7});
}

TEST_CASE("height 3 tower invariants") {
    auto b = build_tower_height(3, top20());
    CHECK(b.order.size() == 4);
    CHECK(b.level(GString{2}).copy_len == 12);
    auto t = criteria::tower_invariants(b, 8);
    const std::string first = t.first();
    INFO(first);
    CHECK(t.ok());
    for (auto* check : {&check_composition, &check_copy_agreement, &check_identity_below_copy, &check_tower_expansionary})
        CHECK((*check)(b).fail == 0);
    CHECK(b.kb_pred(GString{}) == GString{2});
    CHECK_FALSE(b.kb_pred(GString{0}));
    CHECK_THROWS_AS(tower_gamma(b, GString{0}, GString{}, GString{}), std::invalid_argument);
    CHECK_THROWS_AS(b.level(GString{5}), std::invalid_argument);
}

TEST_CASE("omega*2 fragment tower") {
    auto u = notation_to_tree(catalog::omega_times(2), 50).tree;
    auto b = build_tower(u, 2, nice_closure(two_path(40), 40));
    auto t = criteria::tower_invariants(b, 12);
    const std::string first = t.first();
    INFO(first);
    CHECK(t.ok());
}

TEST_CASE("splitting propagation") {
    auto b = build_tower_height(3, top20());
    CHECK(check_splitting_propagation(b, {}, GString{0, 0}).fail == 0);
    StagedFunctional phi({{1, GString{0, 0, 0}, GString{4}}, {1, GString{0, 0, 1}, GString{5}}});
    auto r = check_splitting_propagation(b, phi, GString{0, 0});
    CHECK(r.fail == 0);
    CHECK(r.pass == 3);
    GString deep(std::vector<Nat>(21, 0));
    StagedFunctional late({{1, deep.child(0), GString{4}}, {1, deep.child(1), GString{5}}});
    auto u = check_splitting_propagation(b, late, GString{0, 0});
    CHECK(u.fail == 0);
    CHECK(u.undecided == 3);
}

TEST_CASE("tower errors name the level") {
    CHECK_THROWS_AS(build_tower_height(0, top20()), std::invalid_argument);
    CHECK_THROWS_AS(build_tower_height(2, two_path(20)), TowerError);
}
