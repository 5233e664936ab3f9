#pragma once

// Corrupted artifacts for each checker: a golden scenario is run, one field of
// its result is damaged, and the named checker is run on both versions.

#include <functional>
#include <string>
#include <vector>

#include "treepull/scenario.hpp"

namespace mutations {

using namespace treepull;
using nlohmann::json;

struct Outcome {
    std::string checker;
    std::string what;
    std::size_t clean_fail = 0;
    std::size_t corrupt_fail = 0;
};

inline std::size_t fails(const json& result, const std::string& checker) {
    std::size_t n = 0;
    for (const auto& r : run_checks(result, {checker})) n += r.fail;
    return n;
}

inline json* level(json& result, const GString& node) {
    for (auto& l : result["levels"])
        if (gstring_from_json(l.at("node")) == node) return &l;
    return nullptr;
}

inline json* first_level_with_up(json& result) {
    for (auto& l : result["levels"])
        if (!l.at("up").is_null() && !l.at("gamma_up").empty()) return &l;
    return nullptr;
}

// the gamma pair whose key is longest (first in file order on ties)
inline json& longest_key(json& gamma) {
    json* best = &gamma.at(0);
    for (auto& e : gamma)
        if (e.at(0).size() > best->at(0).size()) best = &e;
    return *best;
}

struct Case {
    std::string scenario;
    std::string checker;
    std::string what;
    std::function<void(json&)> corrupt;
};

inline std::vector<Case> cases() {
    std::vector<Case> out;
    out.push_back({"trivial", "expansionary", "deepest Gamma value set to the empty string",
                   [](json& r) { longest_key(r["gamma"])[1] = json::array(); }});
    out.push_back({"identity-prefix", "identity-prefix", "a frozen string mapped to its child",
                   [](json& r) {
                       for (auto& e : r["gamma"])
                           if (!e[0].empty()) {
                               e[1] = e[0];
                               e[1].push_back(7);
                               return;
                           }
                   }});
    out.push_back({"trivial", "range", "a Gamma value moved outside the tree",
                   [](json& r) { r["gamma"].back()[1] = json::array({99, 99, 99}); }});
    out.push_back({"trivial", "permanence", "an entry stage later than the string's code",
                   [](json& r) {
                       for (auto& e : r["tree"]) {
                           GString t = gstring_from_json(e[0]);
                           if (!t.empty()) {
                               e[1] = t.code() + 1;
                               return;
                           }
                       }
                   }});
    out.push_back({"trivial", "nice", "a third child at level 3",
                   [](json& r) { r["tree"].push_back(json::array({json::array({0, 0, 2}), 0})); }});
    out.push_back({"g0-meet", "genericity", "a G outcome flipped in the report",
                   [](json& r) {
                       for (auto& e : r["report"])
                           if (e["requirement"].get<std::string>().front() == 'G') {
                               e["outcome"] = e["outcome"] == "met" ? "avoided" : "met";
                               return;
                           }
                   }});
    out.push_back({"s0-capture", "splitting", "Gamma of a right child copied from the left child",
                   [](json& r) {
                       GammaMap g;
                       for (const auto& e : r["gamma"]) g[gstring_from_json(e[0])] = gstring_from_json(e[1]);
                       for (auto& e : r["gamma"]) {
                           GString s = gstring_from_json(e[0]);
                           if (s.size() == 3 && s.back() == 1 && g.count(s.prefix(2).child(0))) {
                               e[1] = gstring_to_json(g.at(s.prefix(2).child(0)));
                               return;
                           }
                       }
                   }});
    out.push_back({"split-prop", "expansionary", "deepest gamma_up value set to the empty string",
                   [](json& r) { longest_key((*first_level_with_up(r))["gamma_up"])[1] = json::array(); }});
    out.push_back({"split-prop", "copy-agreement", "an extra root child in the lowest level",
                   [](json& r) { (*level(r, GString{0}))["tree"].push_back(json::array({9})); }});
    out.push_back({"split-prop", "identity-below-copy", "a short string moved by gamma_up",
                   [](json& r) {
                       for (auto& e : (*first_level_with_up(r))["gamma_up"])
                           if (e[0].size() == 1) {
                               e[1] = json::array({e[0][0].get<Nat>() + 1});
                               return;
                           }
                   }});
    out.push_back({"split-prop", "composition", "a short gamma_up value of the last level below the top extended",
                   [](json& r) {
                       for (auto& e : (*level(r, GString{2}))["gamma_up"])
                           if (e[0].size() == 1) {
                               e[1].push_back(0);
                               return;
                           }
                   }});
    out.push_back({"split-prop", "splitting", "the right side of the split pruned from the top tree",
                   [](json& r) {
                       auto& top = (*level(r, GString{}))["tree"];
                       json kept = json::array();
                       for (const auto& s : top)
                           if (!extends(gstring_from_json(s), GString{0, 0, 1})) kept.push_back(s);
                       top = kept;
                   }});
    out.push_back({"rank-single", "rho", "a recorded rank shifted by one",
                   [](json& r) {
                       for (auto& e : r["rank"])
                           if (e[1] == "w") e[1] = "w+1";
                   }});
    return out;
}

inline std::vector<Outcome> all(const std::string& golden_dir) {
    std::map<std::string, json> results;
    std::vector<Outcome> out;
    for (const auto& c : cases()) {
        if (!results.count(c.scenario))
            results[c.scenario] = run_scenario(load_json_file(golden_dir + "/" + c.scenario + ".json")).result;
        json bad = results[c.scenario];
        c.corrupt(bad);
        out.push_back({c.checker + " (" + c.scenario + ")", c.what, fails(results[c.scenario], c.checker),
                       fails(bad, c.checker)});
    }

    // copy-length acceptability works on a table rather than a result file
    auto table = copy_len_table(FiniteTree::closure_of({GString{0}}), 3);
    auto lowered = table;
    lowered.l_pair[{GString{1}, GString{0, 1}}] = 0;
    out.push_back({"acceptable", "a pairwise copy length lowered to zero", check_acceptable(table).fail,
                   check_acceptable(lowered).fail});
    return out;
}

}  // namespace mutations
