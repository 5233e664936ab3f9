#include <doctest.h>

#include <atomic>
#include <thread>

#include "../oracles.hpp"
#include "treepull/trees.hpp"

using namespace treepull;

namespace {

FiniteTree tree_of(std::initializer_list<GString> xs) { return FiniteTree::closure_of(std::vector<GString>(xs)); }

std::vector<GString> all_strings(Nat alphabet, std::size_t max_len) {
    std::vector<GString> out{GString{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < max_len)
            for (Nat x = 0; x < alphabet; ++x) out.push_back(out[i].child(x));
    return out;
}

}  // namespace

TEST_CASE("finite tree basics") {
    std::size_t added = 0;
    auto t = FiniteTree::closure_of({GString{0, 1, 1}}, &added);
    CHECK(added == 3);
    CHECK(t.size() == 4);
    CHECK(t.height() == 3);
    CHECK(t.restrict(1).size() == 2);
    CHECK(t.child_labels(GString{0}) == std::vector<Nat>{1});
    CHECK(t.leaves() == std::vector<GString>{GString{0, 1, 1}});
    CHECK(tree_of({GString{0}, GString{2, 0}}).extensions(GString{2}) == std::vector<GString>{GString{2}, GString{2, 0}});
}

TEST_CASE("kb_less examples and order axioms against the definition") {
    CHECK(kb_less(GString{0, 1}, GString{0}));
    CHECK(kb_less(GString{0, 9}, GString{1}));
    CHECK_FALSE(kb_less(GString{2, 2}, GString{2, 2}));
    auto all = all_strings(3, 3);
    for (const auto& a : all)
        for (const auto& b : all) {
            REQUIRE(kb_less(a, b) == oracle::kb_less(a.entries(), b.entries()));
            REQUIRE((a == b) + kb_less(a, b) + kb_less(b, a) == 1);
        }
}

TEST_CASE("lazy trees enforce budgets and downward closure") {
    std::atomic<int> calls{0};
    LazyTree t([&](const GString& s) { ++calls; return s.size() <= 2 && (s.empty() || s[0] == 0); }, 4, 2);
    CHECK(t.contains(GString{0, 2}));
    CHECK_FALSE(t.contains(GString{1}));
    int before = calls;
    CHECK(t.contains(GString{0, 2}));
    CHECK(calls == before);
    CHECK_THROWS_AS(t.contains(GString{0, 0, 0, 0, 0}), BudgetExceeded);
    CHECK_THROWS_AS(t.contains(GString{3}), BudgetExceeded);
    CHECK(t.materialize().size() == 5);

    LazyTree broken([](const GString& s) { return s != GString{0}; }, 4, 2);
    try {
        broken.contains(GString{0, 1});
        FAIL("expected a downward closure error");
    } catch (const DownwardClosureError& e) {
        CHECK(e.witness == GString{0, 1});
    }

    LazyTree shared([](const GString& s) { return s.size() < 3; }, 6, 3);
    std::vector<std::thread> pool;
    std::atomic<int> hits{0};
    for (int k = 0; k < 4; ++k)
        pool.emplace_back([&] {
            for (const auto& s : all_strings(4, 3)) hits += shared.contains(s);
        });
    for (auto& th : pool) th.join();
    CHECK(hits == 4 * 21);
}

TEST_CASE("niceness") {
    CHECK(is_nice(tree_of({GString{}}), 8).nice);
    auto bad = is_nice(tree_of({GString{0, 0, 2}}), 8);
    CHECK_FALSE(bad.nice);
    REQUIRE(bad.counterexample);
    CHECK(*bad.counterexample == GString{0, 0, 2});
    CHECK(is_nice(tree_of({GString{0, 0, 0}, GString{0, 0, 1}}), 8).nice);
    auto missing = is_nice(tree_of({GString{0, 0, 0}}), 8);
    CHECK_FALSE(missing.nice);
    CHECK(*missing.counterexample == GString{0, 0, 1});
    CHECK(is_nice(tree_of({GString{0, 0, 0}}), 2).nice);

    auto closed = nice_closure(two_path(8), 8);
    CHECK(is_nice(closed, 8).nice);
    for (const auto& m : two_path(8).members()) CHECK(closed.contains(m));

    LazyTree lazy([&](const GString& s) { return closed.contains(s); }, 8, 3);
    CHECK(is_nice(lazy, 8).nice);
    LazyTree lazy_bad([](const GString& s) { return s.size() < 3 || s == GString{0, 0, 0}; }, 8, 3);
    CHECK_FALSE(is_nice(lazy_bad, 8).nice);
}

TEST_CASE("nice_embed keeps order structure") {
    auto single = nice_embed(tree_of({GString{}}));
    CHECK(single.tree.size() == 1);
    CHECK(single.map.at(GString{}) == GString{});

    for (const auto& src : {tree_of({GString{0}, GString{1}}), tree_of({GString{0, 0}}), full_binary(3),
                            tree_of({GString{2, 0, 1}, GString{0, 3}})}) {
        auto e = nice_embed(src);
        CHECK(is_nice(e.tree, 64).nice);
        for (const auto& a : src.members()) {
            REQUIRE(e.tree.contains(e.map.at(a)));
            CHECK(e.map.at(a).size() == 4 * a.size());
            for (const auto& b : src.members()) {
                const auto &x = e.map.at(a), &y = e.map.at(b);
                CHECK(extends(x, y) == extends(a, b));
                CHECK(left_of(x, y) == left_of(a, b));
                CHECK(e.map.at(meet(a, b)) == meet(x, y));
            }
        }
    }
    CHECK(nice_embed(tree_of({GString{0, 0}})).tree.height() == 8);
}

TEST_CASE("eta and kb_succ examples") {
    auto eps = tree_of({GString{}});
    auto one = tree_of({GString{0}});
    CHECK(eta(eps, GString{}) == GString{0});
    CHECK(eta(one, GString{}) == GString{0, 0});
    CHECK(eta(eps, GString{3}) == GString{3});
    CHECK(kb_succ(eps, GString{2}) == GString{3});
    CHECK(kb_succ(one, GString{0, 1}) == GString{0, 2});
    CHECK(kb_succ(one, GString{0}) == GString{1});
    CHECK(kb_succ(eps, GString{}) == GString{0});
    CHECK_THROWS_AS(kb_succ(eps, GString{0, 0}), std::invalid_argument);
}

TEST_CASE("eta and kb_succ agree with brute force fragment order") {
    for (const auto& raw : oracle::all_trees(2, 3)) {
        FiniteTree t = oracle::to_tree(raw);
        KBFragment frag(t, 4);
        const auto& order = frag.order();
        for (std::size_t i = 0; i < order.size(); ++i) {
            const GString& s = order[i];
            // eta: KB-least fragment element extending s
            GString least = s;
            for (const auto& x : order)
                if (extends(x, s)) {
                    least = x;
                    break;
                }
            REQUIRE(eta(t, s) == least);
            if (s.empty()) continue;
            GString next = kb_succ(t, s);
            if (!frag.contains(next)) continue;
            REQUIRE(i + 1 < order.size());
            REQUIRE(order[i + 1] == next);
        }
    }
}

TEST_CASE("kb_rank examples") {
    auto eps = kb_rank(tree_of({GString{}}));
    CHECK(eps.at(GString{5}) == OrdinalCNF::nat(5));
    CHECK(eps.at(GString{}) == OrdinalCNF::omega());
    auto one = kb_rank(tree_of({GString{0}}));
    CHECK(one.at(GString{0, 7}) == OrdinalCNF::nat(7));
    CHECK(one.at(GString{0}) == OrdinalCNF::omega());
    CHECK(one.at(GString{3}) == OrdinalCNF::omega() + OrdinalCNF::nat(3));
    CHECK(one.at(GString{}) == OrdinalCNF::omega().times(2));
    CHECK_THROWS_AS(one.at(GString{1, 1}), std::invalid_argument);
}

TEST_CASE("kb_rank matches the structural oracle; T members are limits, T+ leaves successors") {
    std::size_t trees = 0;
    for (const auto& raw : oracle::all_trees(3, 2)) {
        FiniteTree t = oracle::to_tree(raw);
        oracle::Rank want(raw);
        KbRank got(t);
        for (const auto& s : KBFragment(t, 4).order()) {
            auto r = got.at(s);
            REQUIRE(r == oracle::to_cnf(want.at(s.entries())));
            if (t.contains(s))
                REQUIRE(r.is_limit());
            else
                REQUIRE((r.is_successor() || r.is_zero()));
            REQUIRE(r.is_zero() == (s == eta(t, GString{})));
        }
        ++trees;
    }
    CHECK(trees == 729);
}

TEST_CASE("fragments and generators") {
    KBFragment f(tree_of({GString{}}), 2);
    CHECK(f.order() == std::vector<GString>{GString{0}, GString{1}, GString{2}, GString{}});
    CHECK(f.index_of(GString{}) == 3);
    CHECK_THROWS_AS(f.index_of(GString{3}), std::invalid_argument);
    CHECK(full_binary(2).size() == 7);
    CHECK(single_path(3).size() == 4);
    CHECK(two_path(3).size() == 7);
    CHECK(finitely_many_ones(2).size() == 6);
    CHECK(tree_from_generator("two-path(8)")->size() == 17);
    CHECK_FALSE(tree_from_generator("zigzag(3)"));
}
