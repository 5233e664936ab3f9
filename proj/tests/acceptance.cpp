// One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "criteria.hpp"
#include "mutations.hpp"
#include "oracles.hpp"

using namespace treepull;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
    void absorb(const criteria::Tally& t, const std::string& what) {
        if (!t.ok()) fail(what + ": " + t.first());
    }
};

int run(int n, double limit_s, const std::function<Verdict()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.pass && s > limit_s) v.fail("took " + std::to_string(s) + "s, limit " + std::to_string(limit_s) + "s");
    std::printf("criterion %d: %s (%.2fs)%s%s\n", n, v.pass ? "PASS" : "FAIL", s, v.detail.empty() ? "" : " ",
                v.detail.c_str());
    std::fflush(stdout);
    return v.pass ? 0 : 1;
}

// all strings with at most `len` entries below `alpha`
std::vector<GString> strings_upto(std::size_t len, Nat alpha) {
    std::vector<GString> out{GString{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < len)
            for (Nat x = 0; x < alpha; ++x) out.push_back(out[i].child(x));
    return out;
}

Verdict coding() {
    Verdict v;
    oracle::DiagonalTable table(400000);
    for (Code n = 0; n < 100000; ++n) {
        GString s = decode(n);
        if (encode(s) != n || s.code() != n) v.fail("round trip breaks at " + std::to_string(n));
        if (s.entries() != table.decode(n)) v.fail("decode disagrees with the diagonal walk at " + std::to_string(n));
    }
    for (const auto& s : strings_upto(4, 8))
        for (std::size_t k = 0; k < s.size(); ++k)
            if (!(s.prefix(k).code() < s.code())) v.fail("prefix of " + to_string(s) + " has no smaller code");
    return v;
}

Verdict kb_order() {
    Verdict v;
    auto all = strings_upto(3, 4);
    for (const auto& a : all) {
        if (kb_less(a, a)) v.fail("reflexive at " + to_string(a));
        for (const auto& b : all) {
            if (a != b && kb_less(a, b) == kb_less(b, a)) v.fail("not total on " + to_string(a) + ", " + to_string(b));
            if (kb_less(a, b) != oracle::kb_less(a.entries(), b.entries()))
                v.fail("disagrees with the definition on " + to_string(a) + ", " + to_string(b));
            if (!kb_less(a, b)) continue;
            for (const auto& c : all)
                if (kb_less(b, c) && !kb_less(a, c))
                    v.fail("not transitive on " + to_string(a) + ", " + to_string(b) + ", " + to_string(c));
        }
    }
    // immediacy: nothing of T+ lies strictly between s and kb_succ(s)
    for (const auto& t : {FiniteTree::closure_of({GString{}}), FiniteTree::closure_of({GString{0}})}) {
        const auto wide = KBFragment(t, 12).order();
        for (const auto& s : KBFragment(t, 6).order()) {
            if (s.empty()) continue;
            GString next = kb_succ(t, s);
            if (!kb_less(s, next)) v.fail("kb_succ(" + to_string(s) + ") not above it");
            for (const auto& x : wide)
                if (kb_less(s, x) && kb_less(x, next))
                    v.fail(to_string(x) + " between " + to_string(s) + " and kb_succ " + to_string(next));
        }
    }
    return v;
}

Verdict rho_vs_rank() {
    Verdict v;
    criteria::Tally all;
    std::size_t trees = 0;
    for (const auto& raw : oracle::all_trees(3, 2)) {
        all.merge(criteria::rho_properties(raw, 3, 16));
        ++trees;
    }
    for (const auto& raw : oracle::all_trees(2, 3)) {
        all.merge(criteria::rho_properties(raw, 3, 16));
        ++trees;
    }
    // ternary trees of height 3: a mixed-radix index picks, for each root
    // child, absence or one of the height-2 subtrees; walked with a fixed stride
    const auto subs = oracle::all_trees(3, 2);
    const std::uint64_t radix = subs.size() + 1, total = radix * radix * radix;
    const std::uint64_t samples = 800, stride = 258707;  // coprime to the radix cube
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint64_t idx = (i * stride) % total;
        std::set<std::vector<Nat>> raw{{}};
        for (Nat c = 0; c < 3; ++c, idx /= radix) {
            if (idx % radix == 0) continue;
            for (auto s : subs[idx % radix - 1]) {
                s.insert(s.begin(), c);
                raw.insert(s);
            }
        }
        all.merge(criteria::rho_properties(raw, 3, 16));
        ++trees;
    }
    v.absorb(all, "rho");
    v.detail = std::to_string(trees) + " trees, " + std::to_string(all.checked) + " checks, " +
               std::to_string(all.unresolved) + " unresolved" + (v.pass ? "" : "; " + v.detail);
    return v;
}

Verdict notations() {
    Verdict v;
    for (const char* name : {"w", "w*2", "w^2"}) v.absorb(criteria::notation_fragment(name, 50, 16), name);
    return v;
}

Verdict copy_lengths() {
    Verdict v;
    FiniteTree u = FiniteTree::closure_of({GString{0}});
    if (copy_len(u, GString{}) != 0) v.fail("l(eps)");
    if (copy_len(u, GString{2}) != 12) v.fail("l(<2>)");
    if (copy_len(u, GString{0, 1}) != 12) v.fail("l(<0,1>)");
    v.absorb(criteria::copy_lengths(u, 3, true), "small fragment");
    v.absorb(criteria::copy_lengths(notation_to_tree(catalog::omega_times(2), 50).tree, 3, false), "w*2");
    v.absorb(criteria::copy_lengths(notation_to_tree(catalog::omega_pow(2), 50).tree, 3, false), "w^2");
    v.absorb(criteria::copy_lengths(notation_to_tree(catalog::omega_times(2), 50).tree, 2, true), "w*2 quadruples");
    return v;
}

Verdict goldens(const std::string& dir) {
    Verdict v;
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    std::size_t pulldowns = 0;
    for (const auto& name : names) {
        auto t0 = std::chrono::steady_clock::now();
        json sc = load_json_file(dir + "/" + name + ".json");
        auto a = run_scenario(sc), b = run_scenario(sc);
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 2;
        if (sc.value("kind", "") == "pulldown") ++pulldowns;
        if (a.log_lines != b.log_lines || a.result != b.result) v.fail(name + ": runs differ");
        std::ifstream in(dir + "/expected/" + name + ".log.jsonl");
        std::stringstream want;
        want << in.rdbuf();
        std::string got;
        for (const auto& l : a.log_lines) got += l + "\n";
        if (got != want.str()) v.fail(name + ": log differs from the frozen golden");
        for (const auto& c : run_checks(a.result, {}))
            if (c.fail) v.fail(name + ": " + c.name + " " + c.messages.front());
        if (s > 10) v.fail(name + ": " + std::to_string(s) + "s");
    }
    if (pulldowns < 5) v.fail("fewer than five pulldown scenarios");
    if (v.pass) v.detail = std::to_string(names.size()) + " scenarios";
    return v;
}

Verdict uniformize() {
    Verdict v;
    auto t = criteria::uniformize_properties({{3, 5, 7, 8}, {}}, 1);
    v.absorb(t, "uniformize");
    if (v.pass) v.detail = std::to_string(t.checked) + " checks";
    return v;
}

Verdict tower() {
    Verdict v;
    auto b = build_tower_height(3, nice_closure(two_path(20), 20));
    auto t = criteria::tower_invariants(b, 8);
    v.absorb(t, "tower");
    for (const auto& r : {check_composition(b), check_copy_agreement(b), check_identity_below_copy(b),
                          check_tower_expansionary(b)})
        if (r.fail) v.fail(r.name + ": " + r.messages.front());
    if (v.pass) v.detail = std::to_string(t.checked) + " checks";
    return v;
}

Verdict faults(const std::string& dir) {
    Verdict v;
    auto all = mutations::all(dir);
    for (const auto& m : all) {
        if (m.clean_fail) v.fail(m.checker + " fails on the clean artifact");
        if (!m.corrupt_fail) v.fail(m.checker + " misses: " + m.what);
    }
    if (v.pass) v.detail = std::to_string(all.size()) + " checkers";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : TREEPULL_GOLDEN_DIR;
    int failed = 0;
    failed += run(1, 1, coding);
    failed += run(2, 60, kb_order);
    failed += run(3, 60, rho_vs_rank);
    failed += run(4, 5, notations);
    failed += run(5, 5, copy_lengths);
    failed += run(6, 200, [&] { return goldens(dir); });
    failed += run(7, 5, uniformize);
    failed += run(8, 60, tower);
    failed += run(9, 120, [&] { return faults(dir); });
    return failed ? 1 : 0;
}
