#include "treepull/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "treepull/notations.hpp"

namespace treepull {

using json = nlohmann::json;

namespace {

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ScenarioError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("field \"") + key + "\": " + e.what());
    }
}

Nat nat_from_json(const json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ScenarioError(std::string(what) + " must be a natural number");
    return j.get<Nat>();
}

std::vector<GString> sorted_by_code(std::vector<GString> v) {
    std::sort(v.begin(), v.end(), code_less);
    return v;
}

std::map<Nat, json> indexed(const json& j, const char* what) {
    std::map<Nat, json> out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw ScenarioError(std::string(what) + " must map indices to fixtures");
    for (const auto& [k, v] : j.items()) {
        try {
            std::size_t used = 0;
            Nat i = std::stoull(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
            out[i] = v;
        } catch (const std::exception&) {
            throw ScenarioError(std::string(what) + " has a non-numeric index \"" + k + "\"");
        }
    }
    return out;
}

EnumFixture enum_from_json(const json& j) {
    std::vector<std::pair<Stage, GString>> ev;
    if (!j.is_array()) throw ScenarioError("an enumeration must be a list of [stage, string]");
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw ScenarioError("enumeration event must be [stage, string]");
        ev.emplace_back(nat_from_json(e[0], "event stage"), gstring_from_json(e[1]));
    }
    return EnumFixture(std::move(ev));
}

StagedFunctional functional_from_json(const json& j) {
    std::vector<FunctionalEntry> es;
    if (!j.is_array()) throw ScenarioError("a functional must be a list of [stage, input, output]");
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3) throw ScenarioError("functional entry must be [stage, input, output]");
        es.push_back({nat_from_json(e[0], "entry stage"), gstring_from_json(e[1]), gstring_from_json(e[2])});
    }
    return StagedFunctional(std::move(es));
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

GString gstring_from_json(const json& j) {
    if (j.is_string()) {
        auto s = parse_gstring(j.get<std::string>());
        if (!s) throw ScenarioError("bad string literal \"" + j.get<std::string>() + "\"");
        return *s;
    }
    if (!j.is_array()) throw ScenarioError("a string must be an array of naturals or a literal like \"<0,1>\"");
    std::vector<Nat> xs;
    for (const auto& x : j) xs.push_back(nat_from_json(x, "string entry"));
    return GString(std::move(xs));
}

json gstring_to_json(const GString& s) { return json(s.entries()); }

FiniteTree tree_from_json(const json& j, std::vector<std::string>* warnings) {
    if (j.is_string()) {
        const std::string text = j.get<std::string>();
        static const std::regex nice_re(R"(\s*nice\s*\((.*)\)\s*)");
        std::smatch m;
        if (std::regex_match(text, m, nice_re)) {
            FiniteTree inner = tree_from_json(json(m[1].str()), warnings);
            return nice_closure(inner, inner.height());
        }
        auto t = tree_from_generator(text);
        if (!t) throw ScenarioError("unknown tree generator \"" + text + "\"");
        return *t;
    }
    const json& list = j.is_object() ? need(j, "strings") : j;
    if (!list.is_array()) throw ScenarioError("a tree must be a generator name or a list of strings");
    std::vector<GString> ss;
    for (const auto& s : list) ss.push_back(gstring_from_json(s));
    std::size_t added = 0;
    FiniteTree t = FiniteTree::closure_of(ss, &added);
    if (added && warnings)
        warnings->push_back("tree literal was not downward closed; added " + std::to_string(added) + " strings");
    return t;
}

json tree_to_json(const FiniteTree& t) {
    json out = json::array();
    for (const auto& s : sorted_by_code({t.members().begin(), t.members().end()})) out.push_back(gstring_to_json(s));
    return out;
}

// ------------------------------------------------------------ pulldown

PulldownScenario pulldown_scenario_from_json(const json& j, std::vector<std::string>* warnings) {
    PulldownScenario sc;
    sc.l = get_or<std::size_t>(j, "l", 0);
    const json& tp = need(j, "tprime");
    FiniteTree base = tree_from_json(tp.is_object() && tp.contains("tree") ? tp.at("tree") : tp, warnings);
    std::vector<Flip> flips;
    std::map<GString, Stage> stable;
    if (tp.is_object()) {
        for (const auto& f : tp.value("flips", json::array())) {
            if (!f.is_array() || f.size() != 3 || !f[2].is_string())
                throw ScenarioError("flip must be [stage, string, \"in\"|\"out\"]");
            const std::string dir = f[2].get<std::string>();
            if (dir != "in" && dir != "out") throw ScenarioError("flip direction must be \"in\" or \"out\"");
            flips.push_back({nat_from_json(f[0], "flip stage"), gstring_from_json(f[1]), dir == "in"});
        }
        for (const auto& e : tp.value("stable_at", json::array())) {
            if (!e.is_array() || e.size() != 2) throw ScenarioError("stable_at entry must be [string, stage]");
            stable[gstring_from_json(e[0])] = nat_from_json(e[1], "stable stage");
        }
        if (tp.contains("frozen_prefix")) sc.frozen = tree_from_json(tp.at("frozen_prefix"), warnings);
    }
    sc.tprime = StagedTree(std::move(base), sc.l, std::move(flips), std::move(stable));
    for (const auto& [i, w] : indexed(j.value("w", json()), "w")) sc.w[i] = enum_from_json(w);
    for (const auto& [i, p] : indexed(j.value("phi", json()), "phi")) sc.phi[i] = functional_from_json(p);
    sc.stages = get_or<Stage>(j, "stages", sc.stages);
    sc.depth = get_or<std::size_t>(j, "depth", sc.depth);
    return sc;
}

json pulldown_result_to_json(const PulldownResult& r) {
    json out;
    out["l"] = r.l;
    out["stages"] = r.stages;
    out["depth"] = r.depth;
    json tree = json::array();
    std::vector<GString> ts;
    for (const auto& [t, st] : r.entry_stage) ts.push_back(t);
    for (const auto& t : sorted_by_code(ts)) tree.push_back(json::array({gstring_to_json(t), r.entry_stage.at(t)}));
    out["tree"] = std::move(tree);
    json gamma = json::array();
    std::vector<GString> dom;
    for (const auto& [s, v] : r.final_gamma) dom.push_back(s);
    for (const auto& s : sorted_by_code(dom))
        gamma.push_back(json::array({gstring_to_json(s), gstring_to_json(r.final_gamma.at(s))}));
    out["gamma"] = std::move(gamma);
    out["frozen"] = tree_to_json(r.frozen);
    json rep = json::array();
    for (const auto& e : r.report)
        rep.push_back(json{{"requirement", std::string(1, e.kind) + std::to_string(e.index)},
                           {"sigma", gstring_to_json(e.sigma)},
                           {"outcome", to_string(e.outcome)}});
    out["report"] = std::move(rep);
    json att = json::array();
    for (const auto& [s, st] : r.last_attention) att.push_back(json::array({gstring_to_json(s), st}));
    out["last_attention"] = std::move(att);
    return out;
}

PulldownResult pulldown_result_from_json(const json& j) {
    PulldownResult r;
    try {
        r.l = need(j, "l").get<std::size_t>();
        r.stages = need(j, "stages").get<Stage>();
        r.depth = need(j, "depth").get<std::size_t>();
        std::vector<GString> all;
        for (const auto& e : need(j, "tree")) {
            GString t = gstring_from_json(e.at(0));
            r.entry_stage[t] = e.at(1).get<Stage>();
            all.push_back(t);
        }
        r.tree = FiniteTree::closure_of(all);
        r.final_tree = r.tree.restrict(r.depth);
        for (const auto& e : need(j, "gamma")) r.final_gamma[gstring_from_json(e.at(0))] = gstring_from_json(e.at(1));
        r.frozen = tree_from_json(need(j, "frozen"));
        for (const auto& e : j.value("report", json::array())) {
            const std::string req = e.at("requirement").get<std::string>();
            const std::string o = e.at("outcome").get<std::string>();
            Outcome oc = Outcome::Undecided;
            for (Outcome c : {Outcome::Met, Outcome::Avoided, Outcome::Helping, Outcome::Undecided})
                if (o == to_string(c)) oc = c;
            r.report.push_back({req.at(0), std::stoull(req.substr(1)), gstring_from_json(e.at("sigma")), oc});
        }
        for (const auto& e : j.value("last_attention", json::array()))
            r.last_attention[gstring_from_json(e.at(0))] = e.at(1).get<Stage>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed pulldown result: ") + e.what());
    }
    return r;
}

CheckReport check_g_report(const PulldownResult& r, const std::map<Nat, EnumFixture>& w) {
    CheckReport c("g-report");
    for (const auto& e : r.report) {
        if (e.kind != 'G') continue;
        auto g = r.final_gamma.find(e.sigma);
        bool witness = false;
        auto it = w.find(e.index);
        if (g != r.final_gamma.end() && it != w.end()) {
            auto ws = it->second.enumerated(r.stages);
            for (std::size_t n = 0; n <= g->second.size() && !witness; ++n) {
                GString p = g->second.prefix(n);
                witness = ws.count(p) && r.tree.contains(p);
            }
        }
        if (witness == (e.outcome == Outcome::Met))
            ++c.pass;
        else
            c.add_fail("G" + std::to_string(e.index) + " at " + to_string(e.sigma) + " reported " +
                       to_string(e.outcome) + (witness ? " but a witness exists" : " without a witness"));
    }
    return c;
}

// ------------------------------------------------------------ tower

json tower_to_json(const TowerBundle& b) {
    json out;
    out["u"] = tree_to_json(b.u);
    out["branch"] = b.branch;
    out["depth"] = b.depth;
    json order = json::array();
    for (const auto& s : b.order) order.push_back(gstring_to_json(s));
    out["order"] = std::move(order);
    json levels = json::array();
    for (const auto& node : b.order) {
        const TowerLevel& lv = b.level(node);
        json l;
        l["node"] = gstring_to_json(node);
        l["copy_len"] = lv.copy_len;
        l["up"] = lv.up ? gstring_to_json(*lv.up) : json();
        l["tree"] = tree_to_json(lv.tree);
        json g = json::array();
        std::vector<GString> dom;
        for (const auto& [s, v] : lv.gamma_up) dom.push_back(s);
        for (const auto& s : sorted_by_code(dom))
            g.push_back(json::array({gstring_to_json(s), gstring_to_json(lv.gamma_up.at(s))}));
        l["gamma_up"] = std::move(g);
        levels.push_back(std::move(l));
    }
    out["levels"] = std::move(levels);
    return out;
}

TowerBundle tower_from_json(const json& j) {
    TowerBundle b;
    try {
        b.u = tree_from_json(need(j, "u"));
        b.branch = need(j, "branch").get<Nat>();
        b.depth = need(j, "depth").get<std::size_t>();
        for (const auto& s : need(j, "order")) b.order.push_back(gstring_from_json(s));
        for (const auto& l : need(j, "levels")) {
            TowerLevel lv;
            lv.node = gstring_from_json(l.at("node"));
            lv.copy_len = l.at("copy_len").get<std::size_t>();
            if (!l.at("up").is_null()) lv.up = gstring_from_json(l.at("up"));
            lv.tree = tree_from_json(l.at("tree"));
            for (const auto& e : l.at("gamma_up")) lv.gamma_up[gstring_from_json(e.at(0))] = gstring_from_json(e.at(1));
            b.levels[lv.node] = std::move(lv);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed tower result: ") + e.what());
    }
    for (const auto& s : b.order)
        if (!b.levels.count(s)) throw ScenarioError("tower result lacks level " + to_string(s));
    return b;
}

namespace {

struct TowerSpec {
    FiniteTree u;
    Nat branch = 0;
};

TowerSpec tower_spec(const json& j, const RunOptions& opt) {
    TowerSpec t;
    if (j.contains("height")) {
        Nat k = nat_from_json(j.at("height"), "height");
        if (k == 0) throw ScenarioError("tower height must be positive");
        t.u = FiniteTree::closure_of({GString{}});
        t.branch = k - 1;
    } else if (j.contains("notation")) {
        auto a = parse_notation(j.at("notation").get<std::string>());
        if (!a) throw ScenarioError("unknown notation \"" + j.at("notation").get<std::string>() + "\"");
        try {
            t.u = notation_to_tree(*a, get_or<Nat>(j, "notation_stages", 50)).tree;
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
        t.branch = get_or<Nat>(j, "branch", 2);
    } else {
        t.u = tree_from_json(need(j, "u"));
        t.branch = get_or<Nat>(j, "branch", 2);
    }
    if (opt.branch_bound && !j.contains("height")) t.branch = *opt.branch_bound;
    return t;
}

json rank_table(const FiniteTree& t, Nat branch) {
    KbRank rank(t);
    json out = json::array();
    for (const auto& s : KBFragment(t, branch).order())
        out.push_back(json::array({gstring_to_json(s), rank.at(s).str()}));
    return out;
}

}  // namespace

// ------------------------------------------------------------ run

RunOutput run_scenario(const json& in, const RunOptions& opt) {
    if (!in.is_object()) throw ScenarioError("scenario must be a JSON object");
    if (get_or<int>(in, "schema", -1) != kSchemaVersion)
        throw ScenarioError("unsupported schema; expected \"schema\": " + std::to_string(kSchemaVersion));
    json sc = in;
    if (opt.stages) sc["stages"] = *opt.stages;
    if (opt.depth) sc["depth"] = *opt.depth;
    if (opt.branch_bound && sc.value("kind", "") != "tower") sc["branch"] = *opt.branch_bound;

    RunOutput out;
    out.name = get_or<std::string>(sc, "name", "scenario");
    const std::string kind = get_or<std::string>(sc, "kind", "");
    json result{{"schema", kSchemaVersion}, {"kind", kind}, {"name", out.name}, {"scenario", sc}};

    if (kind == "pulldown") {
        PulldownScenario p = pulldown_scenario_from_json(sc, &out.warnings);
        PulldownResult r = run_pulldown(p);
        result.update(pulldown_result_to_json(r));
        for (const auto& e : r.log) out.log_lines.push_back(to_jsonl(e));
    } else if (kind == "tower") {
        TowerSpec t = tower_spec(sc, opt);
        TowerOptions to;
        to.stages = get_or<Stage>(sc, "stages", to.stages);
        if (sc.contains("depth")) to.depth = sc.at("depth").get<std::size_t>();
        FiniteTree top = tree_from_json(need(sc, "top"), &out.warnings);
        TowerBundle b = build_tower(t.u, t.branch, top, to);
        result.update(tower_to_json(b));
        for (const auto& node : b.order)
            for (Event e : b.level(node).log) {
                e.payload["level"] = gstring_to_json(node);
                out.log_lines.push_back(to_jsonl(e));
            }
    } else if (kind == "rank") {
        FiniteTree t = tree_from_json(need(sc, "tree"), &out.warnings);
        result["rank"] = rank_table(t, get_or<Nat>(sc, "branch", 3));
    } else if (kind == "notation") {
        auto a = parse_notation(need(sc, "notation").get<std::string>());
        if (!a) throw ScenarioError("unknown notation \"" + sc.at("notation").get<std::string>() + "\"");
        NotationTree nt;
        try {
            nt = notation_to_tree(*a, get_or<Nat>(sc, "stages", 50), get_or<Nat>(sc, "budget", 16));
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
        result["u"] = tree_to_json(nt.tree);
        json labels = json::array();
        for (const auto& s : sorted_by_code({nt.tree.members().begin(), nt.tree.members().end()}))
            labels.push_back(json::array({gstring_to_json(s), nt.labels.at(s)->key(), nt.entered_at.at(s)}));
        result["labels"] = std::move(labels);
        result["rank"] = rank_table(nt.tree, get_or<Nat>(sc, "branch", 2));
    } else {
        throw ScenarioError("unknown scenario kind \"" + kind + "\"");
    }
    out.result = std::move(result);
    return out;
}

// ------------------------------------------------------------ checks

std::vector<std::string> checkers_for(const std::string& kind) {
    if (kind == "pulldown")
        return {"expansionary", "identity-prefix", "range", "permanence", "nice", "genericity", "splitting"};
    if (kind == "tower")
        return {"expansionary", "nice", "copy-agreement", "composition", "identity-below-copy", "splitting"};
    if (kind == "rank") return {"rho"};
    return {};
}

namespace {

const std::vector<std::string> kAllCheckers = {"expansionary", "identity-prefix", "range",
                                               "permanence",   "nice",            "genericity",
                                               "splitting",    "copy-agreement",  "composition",
                                               "identity-below-copy", "rho"};

CheckReport merged(const std::string& name, const std::vector<CheckReport>& parts) {
    CheckReport r(name);
    for (const auto& p : parts) {
        r.pass += p.pass;
        r.fail += p.fail;
        r.undecided += p.undecided;
        r.messages.insert(r.messages.end(), p.messages.begin(), p.messages.end());
    }
    return r;
}

CheckReport pulldown_check(const std::string& name, const PulldownResult& r, const PulldownScenario& sc) {
    if (name == "expansionary") return check_expansionary(r.final_gamma, FiniteTree{});
    if (name == "identity-prefix") return check_identity_prefix(r.final_gamma, r.frozen);
    if (name == "range") return check_range(r.final_gamma, r.tree);
    if (name == "permanence") return check_permanence(r.entry_stage);
    if (name == "nice") return check_nice(r.final_tree, r.depth);
    if (name == "genericity") {
        std::vector<CheckReport> parts;
        if (sc.w.empty()) parts.push_back(check_genericity(r.final_tree, {}, r.depth).summary);
        for (const auto& [i, w] : sc.w) parts.push_back(check_genericity(r.final_tree, w.enumerated(r.stages), r.depth).summary);
        parts.push_back(check_g_report(r, sc.w));
        return merged("genericity", parts);
    }
    // splitting
    std::vector<CheckReport> parts;
    for (const auto& [i, phi] : sc.phi)
        parts.push_back(check_splitting({&r.tree, &r.final_gamma, &phi, i, r.l, r.stages, &r.entry_stage, &r.last_attention}));
    CheckReport out = merged("splitting", parts);
    if (sc.phi.empty()) ++out.pass;
    return out;
}

CheckReport tower_check(const std::string& name, const TowerBundle& b, const json& sc) {
    if (name == "expansionary") return check_tower_expansionary(b);
    if (name == "copy-agreement") return check_copy_agreement(b);
    if (name == "composition") return check_composition(b);
    if (name == "identity-below-copy") return check_identity_below_copy(b);
    if (name == "nice") {
        std::vector<CheckReport> parts;
        for (const auto& node : b.order) parts.push_back(check_nice(b.level(node).tree, b.depth));
        return merged("nice", parts);
    }
    StagedFunctional phi = sc.contains("phi") ? functional_from_json(sc.at("phi")) : StagedFunctional{};
    GString stub = sc.contains("stub") ? gstring_from_json(sc.at("stub")) : GString{};
    CheckReport r = check_splitting_propagation(b, phi, stub);
    r.name = "splitting";
    return r;
}

// heights of rho against both the rank table in the result and a fresh rank computation
CheckReport rho_check(const json& result) {
    CheckReport r("rho");
    const json& sc = need(result, "scenario");
    FiniteTree t = tree_from_json(need(sc, "tree"));
    std::map<GString, std::string> recorded;
    for (const auto& e : result.value("rank", json::array())) recorded[gstring_from_json(e.at(0))] = e.at(1).get<std::string>();
    KbRank rank(t);
    Rho rh(t);
    for (const auto& s : KBFragment(t, get_or<Nat>(sc, "branch", 3)).order()) {
        auto h = height(rh.at(s), 16);
        auto rec = recorded.find(s);
        if (!h)
            r.add_undecided("height of rho(" + to_string(s) + ") unresolved");
        else if (*h != rank.at(s))
            r.add_fail("rho(" + to_string(s) + ") has height " + h->str() + " but rank " + rank.at(s).str());
        else if (rec == recorded.end())
            r.add_fail("rank of " + to_string(s) + " missing from the result");
        else if (rec->second != h->str())
            r.add_fail("result records rank " + rec->second + " for " + to_string(s) + " but rho has height " + h->str());
        else
            ++r.pass;
    }
    return r;
}

}  // namespace

std::vector<CheckReport> run_checks(const json& result, const std::vector<std::string>& names_in) {
    if (!result.is_object()) throw ScenarioError("result must be a JSON object");
    const std::string kind = get_or<std::string>(result, "kind", "");
    const auto applicable = checkers_for(kind);
    std::vector<std::string> names = names_in.empty() ? applicable : names_in;
    for (const auto& n : names) {
        if (std::find(kAllCheckers.begin(), kAllCheckers.end(), n) == kAllCheckers.end())
            throw ScenarioError("unknown checker \"" + n + "\"");
        if (std::find(applicable.begin(), applicable.end(), n) == applicable.end())
            throw ScenarioError("checker \"" + n + "\" does not apply to " + (kind.empty() ? "this" : kind) + " results");
    }
    const json& sc = need(result, "scenario");
    std::vector<CheckReport> out;
    if (kind == "pulldown") {
        PulldownResult r = pulldown_result_from_json(result);
        PulldownScenario p = pulldown_scenario_from_json(sc);
        for (const auto& n : names) out.push_back(pulldown_check(n, r, p));
    } else if (kind == "tower") {
        TowerBundle b = tower_from_json(result);
        for (const auto& n : names) out.push_back(tower_check(n, b, sc));
    } else if (kind == "rank") {
        for (const auto& n : names) {
            (void)n;
            out.push_back(rho_check(result));
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].name = names[i];
    return out;
}

}  // namespace treepull
