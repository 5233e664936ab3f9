#include "treepull/pulldown.hpp"

#include <algorithm>

namespace treepull {

using nlohmann::json;

namespace {

json jstr(const GString& s) {
    json a = json::array();
    for (Nat x : s.entries()) a.push_back(x);
    return a;
}

bool nice_admissible(const GString& t) { return t.empty() || t.size() % 4 != 3 || t.back() <= 1; }

}  // namespace

// ---------------------------------------------------------------- validate

void validate(const PulldownScenario& sc) {
    if (sc.l % 4 != 0) throw ValidationError("l must be a multiple of 4, got " + std::to_string(sc.l));
    FiniteTree prefix = sc.frozen ? sc.frozen->restrict(sc.l) : sc.tprime.frozen_prefix();
    if (prefix.empty()) throw ValidationError("frozen prefix is empty");
    if (auto rep = is_nice(prefix, sc.l); !rep.nice)
        throw ValidationError("frozen prefix is not nice at " + to_string(*rep.counterexample), rep.counterexample);
    if (sc.tprime.frozen_depth() != sc.l)
        throw ValidationError("staged tree is frozen at depth " + std::to_string(sc.tprime.frozen_depth()) +
                              " but l is " + std::to_string(sc.l));
    if (sc.frozen) {
        FiniteTree mine = sc.tprime.frozen_prefix();
        for (const auto& m : prefix.members())
            if (!mine.contains(m))
                throw ValidationError("T' disagrees with the frozen prefix at " + to_string(m), m);
        for (const auto& m : mine.members())
            if (!prefix.contains(m))
                throw ValidationError("T' disagrees with the frozen prefix at " + to_string(m), m);
    }
    if (auto rep = is_nice(sc.tprime.base(), sc.tprime.base().height()); !rep.nice)
        throw ValidationError("T' is not nice at " + to_string(*rep.counterexample), rep.counterexample);
}

// ------------------------------------------------------------------ events

std::string to_jsonl(const Event& e) {
    json j;
    j["stage"] = e.stage;
    j["actor"] = e.actor;
    j["action"] = e.action;
    j["payload"] = e.payload;
    return j.dump();
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Met: return "met";
        case Outcome::Avoided: return "avoided";
        case Outcome::Helping: return "helping";
        case Outcome::Undecided: return "undecided-at-budget";
    }
    return "?";
}

// ---------------------------------------------------------------- Pulldown

Pulldown::Pulldown(PulldownScenario sc) : sc_(std::move(sc)), gate_(&sc_.tprime) {
    validate(sc_);
    frozen_ = sc_.frozen ? sc_.frozen->restrict(sc_.l) : sc_.tprime.frozen_prefix();
    for (const auto& m : frozen_.members()) {
        tree_.emplace(m, 0);
        gamma_.emplace(m, m);
        inverse_.emplace(m, m);
    }
}

void Pulldown::log(Stage s, std::string actor, std::string action, json payload) {
    log_.push_back({s, std::move(actor), std::move(action), std::move(payload)});
}

std::optional<GString> Pulldown::gamma_of(const GString& s) const {
    auto it = gamma_.find(s);
    if (it == gamma_.end()) return std::nullopt;
    return it->second;
}

void Pulldown::enumerate(const GString& tau, Stage s) {
    std::vector<GString> added;
    for (std::size_t n = 0; n <= tau.size(); ++n) {
        GString p = tau.prefix(n);
        if (tree_.count(p)) continue;
        if (p.code() < s)
            throw InvariantBreach("stage " + std::to_string(s) + " enumerates " + to_string(p) +
                                  " whose code is already excluded");
        tree_.emplace(p, s);
        added.push_back(p);
    }
    for (const auto& p : added) {
        if (p.size() % 4 != 2 || p.size() < sc_.l) continue;
        for (Nat x : {Nat{0}, Nat{1}}) {
            GString c = p.child(x);
            if (!tree_.count(c)) {
                if (c.code() < s) throw InvariantBreach("niceness backfill below stage at " + to_string(c));
                tree_.emplace(c, s);
            }
        }
    }
}

std::vector<GString> Pulldown::tree_extensions(const GString& t) const {
    std::vector<GString> out;
    for (auto it = tree_.lower_bound(t); it != tree_.end() && extends(it->first, t); ++it) out.push_back(it->first);
    return out;
}

void Pulldown::undefine_above(const GString& sigma, Stage s, const std::set<GString>& keep) {
    json dropped = json::array();
    auto it = gamma_.upper_bound(sigma);
    while (it != gamma_.end() && extends(it->first, sigma)) {
        if (keep.count(it->first)) {
            ++it;
            continue;
        }
        dropped.push_back(jstr(it->first));
        marked_.insert(it->first);
        inverse_.erase(it->second);
        it = gamma_.erase(it);
    }
    if (!dropped.empty()) log(s, "injury", "undefine", json{{"above", jstr(sigma)}, {"strings", dropped}});
}

void Pulldown::define(const GString& sigma, const GString& value, Stage s, const std::string& actor,
                      const std::string& action) {
    undefine_above(sigma, s, {});
    if (auto old = gamma_of(sigma)) inverse_.erase(*old);
    enumerate(value, s);
    gamma_[sigma] = value;
    inverse_[value] = sigma;
    log(s, actor, action, json{{"sigma", jstr(sigma)}, {"value", jstr(value)}});
}

GString Pulldown::fresh_value(const GString& base, const GString& owner, Stage s) {
    GString b = base;
    if (b.size() % 4 == 2) b = b.child(0);  // follow the 0 branch through level 3
    Nat k = next_k_[owner];
    while (b.child(k).code() <= s) ++k;
    next_k_[owner] = k + 1;
    GString v = b.child(k);
    // keep room for children labelled 2 or more below a level-3 position
    if (v.size() % 4 == 2 && owner.size() % 4 != 2) v = v.child(0);
    return v;
}

GString Pulldown::extend(const GString& nu, const GString& owner, Stage s) {
    auto it = tree_.find(nu);
    if (it == tree_.end()) throw InvariantBreach("extend from " + to_string(nu) + " which is not in T_s");
    // lexicographic successor that extends the current string is its least child
    for (auto nx = std::next(it); nx != tree_.end() && proper_extends(nx->first, it->first); nx = std::next(it)) it = nx;
    return fresh_value(it->first, owner, s);
}

bool Pulldown::psi(const GString& tau, const GString& upsilon, Stage s, const StagedFunctional& phi) const {
    auto g = gamma_of(upsilon);
    if (!g) return false;
    for (auto it = tree_.lower_bound(*g); it != tree_.end() && extends(it->first, *g); ++it) {
        if (incompatible(phi.eval(it->first, s), tau)) return true;
    }
    return false;
}

bool psi(const Pulldown& state, const GString& tau, const GString& upsilon, Stage s, const StagedFunctional& phi) {
    return state.psi(tau, upsilon, s, phi);
}

bool Pulldown::case_r(const GString& sigma, Stage s) {
    const Nat i = sigma.size() / 4;
    const GString g = gamma_.at(sigma);
    const std::string actor = "R" + std::to_string(i);
    auto a_sigma = gate_.appears_enter(sigma, s);
    Stage as = a_sigma.value_or(s);
    auto cone = tree_extensions(g);
    // help search over higher priority strings
    std::optional<std::tuple<Stage, Code, GString, GString>> best;
    for (const auto& [u, gu] : gamma_) {
        if (u == sigma || u.size() % 4 != 0 || u.size() <= sc_.l) continue;
        auto phi_it = sc_.phi.find(u.size() / 4);
        if (phi_it == sc_.phi.end()) continue;
        if (!gate_.query(u, s)) continue;
        auto au = gate_.appears_enter(u, s);
        if (!au) continue;
        if (std::make_pair(*au, u.code()) >= std::make_pair(as, sigma.code())) continue;
        if (best && std::make_pair(*au, u.code()) >= std::make_pair(std::get<0>(*best), std::get<1>(*best))) continue;
        if (psi(g, u, s, phi_it->second)) continue;
        std::optional<GString> witness;
        for (const auto& t : cone) {
            if (psi(t, u, s, phi_it->second) && (!witness || code_less(t, *witness))) witness = t;
        }
        if (witness) best = std::make_tuple(*au, u.code(), u, *witness);
    }
    if (best) {
        const GString& u = std::get<2>(*best);
        const GString& t = std::get<3>(*best);
        GString v = extend(t, sigma, s);
        define(sigma, v, s, actor, "help");
        log_.back().payload["upsilon"] = jstr(u);
        log_.back().payload["tau"] = jstr(t);
        r_last_[sigma] = "help";
        return true;
    }
    auto phi_it = sc_.phi.find(i);
    if (phi_it == sc_.phi.end()) return false;
    const StagedFunctional& phi = phi_it->second;
    GString out = phi.eval(g, s);
    std::vector<GString> xis;
    for (const auto& [x, gx] : gamma_) xis.push_back(x);
    std::sort(xis.begin(), xis.end(), code_less);
    for (const auto& xi : xis) {
        if (xi.empty() || !incompatible(xi, sigma)) continue;
        if (!gate_.query(xi, s)) continue;
        const GString& gx = gamma_.at(xi);
        auto gpred = gamma_of(predecessor(xi));
        if (!gpred) continue;
        if (!(extends(gx, out) && proper_extends(out, *gpred))) continue;
        std::optional<GString> witness;
        for (const auto& t : cone) {
            if (incompatible(phi.eval(t, s), gx) && (!witness || code_less(t, *witness))) witness = t;
        }
        if (!witness) continue;
        GString v = extend(*witness, sigma, s);
        define(sigma, v, s, actor, "diverge");
        log_.back().payload["xi"] = jstr(xi);
        log_.back().payload["tau"] = jstr(*witness);
        r_last_[sigma] = "diverge";
        return true;
    }
    return false;
}

bool Pulldown::case_g(const GString& sigma, Stage s) {
    const Nat i = (sigma.size() - 1) / 4;
    auto w_it = sc_.w.find(i);
    if (w_it == sc_.w.end()) return false;
    const GString g = gamma_.at(sigma);
    auto ws = w_it->second.enumerated(s);
    for (std::size_t n = 0; n <= g.size(); ++n)
        if (ws.count(g.prefix(n))) return false;
    for (const auto& nu : tree_extensions(g)) {
        if (!ws.count(nu)) continue;
        GString v = extend(nu, sigma, s);
        define(sigma, v, s, "G" + std::to_string(i), "meet");
        log_.back().payload["nu"] = jstr(nu);
        return true;
    }
    return false;
}

bool Pulldown::case_s(const GString& sigma, Stage s) {
    const Nat i = (sigma.size() - 2) / 4;
    auto phi_it = sc_.phi.find(i);
    if (phi_it == sc_.phi.end()) return false;
    const StagedFunctional& phi = phi_it->second;
    const GString g = gamma_.at(sigma);
    auto g0 = gamma_of(sigma.child(0));
    auto g1 = gamma_of(sigma.child(1));
    if (g0 && g1 && incompatible(phi.eval(*g0, s), phi.eval(*g1, s))) return false;
    std::vector<std::pair<GString, GString>> outs;
    for (const auto& t : tree_extensions(g)) {
        GString o = phi.eval(t, s);
        if (!o.empty()) outs.emplace_back(t, o);
    }
    for (std::size_t a = 0; a < outs.size(); ++a) {
        for (std::size_t b = 0; b < outs.size(); ++b) {
            const GString& t0 = outs[a].first;
            const GString& t1 = outs[b].first;
            if (!left_of(t0, t1) || !incompatible(outs[a].second, outs[b].second)) continue;
            GString mu = meet(t0, t1);
            if (t0[mu.size()] != 0 || t1[mu.size()] != 1) continue;
            const std::string actor = "S" + std::to_string(i);
            undefine_above(sigma, s, {});
            if (mu != g) {
                inverse_.erase(g);
                gamma_[sigma] = mu;
                inverse_[mu] = sigma;
            }
            log(s, actor, "split",
                json{{"sigma", jstr(sigma)}, {"value", jstr(mu)}, {"tau0", jstr(t0)}, {"tau1", jstr(t1)}});
            for (Nat j : {Nat{0}, Nat{1}}) {
                GString c = sigma.child(j);
                if (!gate_.attend(c, s)) continue;
                GString v = extend(j == 0 ? t0 : t1, c, s);
                define(c, v, s, actor, "split-child");
                marked_.erase(c);
            }
            return true;
        }
    }
    return false;
}

bool Pulldown::attend(const GString& sigma, Stage s) {
    last_attention_[sigma] = s;
    if (!gate_.attend(sigma, s + 1)) {
        undefine_above(sigma, s, {});
        inverse_.erase(gamma_.at(sigma));
        gamma_.erase(sigma);
        marked_.insert(sigma);
        log(s, "T'", "drop", json{{"sigma", jstr(sigma)}});
        return true;
    }
    switch (sigma.size() % 4) {
        case 0: return case_r(sigma, s);
        case 1: return case_g(sigma, s);
        case 2: return case_s(sigma, s);
        default: return false;
    }
}

void Pulldown::second_half(const GString& tau, Stage s) {
    if (tau.empty()) return;
    std::optional<GString> star;
    std::size_t n = tau.size();
    while (n-- > 0) {
        auto it = inverse_.find(tau.prefix(n));
        if (it != inverse_.end() && it->second.size() >= sc_.l) {
            star = it->second;
            break;
        }
    }
    if (!star) return;
    const GString& base = gamma_.at(*star);
    Nat x = tau[base.size()];
    GString c = star->child(x);
    if (base.size() + 1 == tau.size() && !in_tree(tau) && nice_admissible(tau)) {
        enumerate(tau, s);
        log(s, "enum", "enumerate", json{{"tau", jstr(tau)}, {"sigma", jstr(*star)}});
    }
    if (!gate_.attend(c, s)) return;
    if (gamma_.count(c) && !marked_.count(c)) return;
    if (!in_tree(tau)) {
        if (!in_tree(predecessor(tau)) || !nice_admissible(tau)) return;
        enumerate(tau, s);
        log(s, "enum", "enumerate", json{{"tau", jstr(tau)}, {"sigma", jstr(*star)}});
    }
    GString v = fresh_value(tau, c, s);
    define(c, v, s, "dom", "define");
    marked_.erase(c);
}

void Pulldown::stage(Stage s) {
    marked_.clear();
    GString tau = decode(s);
    std::vector<GString> attended;
    for (std::size_t n = 0; n <= tau.size(); ++n) {
        auto it = inverse_.find(tau.prefix(n));
        if (it != inverse_.end() && it->second.size() > sc_.l) attended.push_back(it->second);
    }
    for (const auto& sigma : attended) {
        if (!gamma_.count(sigma)) break;
        if (attend(sigma, s)) break;
    }
    second_half(tau, s);
}

void Pulldown::run() {
    for (Stage s = 0; s < sc_.stages; ++s) stage(s);
}

PulldownResult Pulldown::result() const {
    PulldownResult r;
    r.l = sc_.l;
    r.stages = sc_.stages;
    r.depth = sc_.depth;
    std::vector<GString> all;
    for (const auto& [t, st] : tree_) all.push_back(t);
    r.tree = FiniteTree::closure_of(all);
    r.final_tree = r.tree.restrict(sc_.depth);
    r.entry_stage = tree_;
    r.final_gamma = gamma_;
    r.frozen = frozen_;
    r.log = log_;
    r.last_attention = last_attention_;
    const Stage h = sc_.stages;
    for (const auto& [sigma, g] : gamma_) {
        if (sigma.size() <= sc_.l || sigma.size() > sc_.depth) continue;
        switch (sigma.size() % 4) {
            case 1: {
                Nat i = (sigma.size() - 1) / 4;
                auto w_it = sc_.w.find(i);
                if (w_it == sc_.w.end()) {
                    r.report.push_back({'G', i, sigma, Outcome::Avoided});
                    break;
                }
                auto ws = w_it->second.enumerated(h);
                bool met = false;
                for (std::size_t n = 0; n <= g.size() && !met; ++n) met = ws.count(g.prefix(n)) && r.tree.contains(g.prefix(n));
                if (met) {
                    r.report.push_back({'G', i, sigma, Outcome::Met});
                    break;
                }
                bool any = false;
                for (const auto& t : r.tree.extensions(g)) any = any || ws.count(t);
                r.report.push_back({'G', i, sigma, any ? Outcome::Undecided : Outcome::Avoided});
                break;
            }
            case 2: {
                Nat i = (sigma.size() - 2) / 4;
                auto phi_it = sc_.phi.find(i);
                if (phi_it == sc_.phi.end()) {
                    r.report.push_back({'S', i, sigma, Outcome::Avoided});
                    break;
                }
                const auto& phi = phi_it->second;
                auto g0 = gamma_of(sigma.child(0));
                auto g1 = gamma_of(sigma.child(1));
                if (g0 && g1 && incompatible(phi.eval(*g0, h), phi.eval(*g1, h))) {
                    r.report.push_back({'S', i, sigma, Outcome::Met});
                    break;
                }
                bool split = false;
                auto ext = r.tree.extensions(g);
                for (std::size_t a = 0; a < ext.size() && !split; ++a)
                    for (std::size_t b = a + 1; b < ext.size() && !split; ++b)
                        split = incompatible(phi.eval(ext[a], h), phi.eval(ext[b], h));
                r.report.push_back({'S', i, sigma, split ? Outcome::Undecided : Outcome::Avoided});
                break;
            }
            case 0: {
                Nat i = sigma.size() / 4;
                if (!sc_.phi.count(i)) {
                    r.report.push_back({'R', i, sigma, Outcome::Avoided});
                    break;
                }
                auto it = r_last_.find(sigma);
                Outcome o = Outcome::Undecided;
                if (it != r_last_.end()) o = it->second == "help" ? Outcome::Helping : Outcome::Met;
                r.report.push_back({'R', i, sigma, o});
                break;
            }
            default: break;
        }
    }
    return r;
}

PulldownResult run_pulldown(const PulldownScenario& sc) {
    Pulldown p(sc);
    p.run();
    return p.result();
}

// ------------------------------------------------------------------ checks

CheckReport check_expansionary(const GammaMap& gamma, const FiniteTree& domain) {
    CheckReport r{"expansionary"};
    std::vector<std::pair<GString, GString>> pts;
    for (const auto& [s, v] : gamma)
        if (domain.empty() || domain.contains(s)) pts.emplace_back(s, v);
    for (const auto& [s, v] : pts) {
        if (s.empty()) continue;
        auto it = gamma.find(predecessor(s));
        if (it == gamma.end()) continue;
        if (extends(v, it->second.child(s.back()))) ++r.pass;
        else r.add_fail("Gamma(" + to_string(s) + ") = " + to_string(v) + " does not extend Gamma(" +
                        to_string(predecessor(s)) + ")^" + std::to_string(s.back()));
    }
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = 0; b < pts.size(); ++b) {
            if (a == b) continue;
            const auto& [s, u] = pts[a];
            const auto& [t, v] = pts[b];
            if (extends(t, s) && !extends(v, u)) {
                r.add_fail("extension not preserved: " + to_string(s) + " below " + to_string(t));
                continue;
            }
            if (!left_of(s, t)) continue;
            if (!left_of(u, v)) {
                r.add_fail("left-of not preserved: " + to_string(s) + " left of " + to_string(t));
                continue;
            }
            auto m = gamma.find(meet(s, t));
            if (m != gamma.end() && meet(u, v) != m->second) {
                r.add_fail("meet not preserved for " + to_string(s) + ", " + to_string(t));
                continue;
            }
            ++r.pass;
        }
    }
    return r;
}

CheckReport check_identity_prefix(const GammaMap& gamma, const FiniteTree& prefix) {
    CheckReport r{"identity-prefix"};
    for (const auto& m : prefix.members()) {
        auto it = gamma.find(m);
        if (it != gamma.end() && it->second == m) ++r.pass;
        else r.add_fail("Gamma is not the identity at " + to_string(m));
    }
    return r;
}

CheckReport check_range(const GammaMap& gamma, const FiniteTree& tree) {
    CheckReport r{"range"};
    for (const auto& [s, v] : gamma) {
        if (tree.contains(v)) ++r.pass;
        else r.add_fail("Gamma(" + to_string(s) + ") = " + to_string(v) + " is not in T");
    }
    return r;
}

CheckReport check_permanence(const std::map<GString, Stage>& entry_stage) {
    CheckReport r{"permanence"};
    for (const auto& [t, st] : entry_stage) {
        if (st == 0 || st <= t.code()) ++r.pass;
        else r.add_fail(to_string(t) + " entered at stage " + std::to_string(st) + " after its code");
    }
    return r;
}

CheckReport check_nice(const FiniteTree& t, std::size_t depth) {
    CheckReport r{"nice"};
    auto rep = is_nice(t, depth);
    if (rep.nice) ++r.pass;
    else r.add_fail("niceness fails at " + to_string(*rep.counterexample));
    return r;
}

const char* to_string(StubVerdict v) {
    switch (v) {
        case StubVerdict::Meets: return "meets";
        case StubVerdict::StronglyAvoids: return "strongly-avoids-at-horizon";
        case StubVerdict::Undecided: return "undecided";
    }
    return "?";
}

GenericityReport check_genericity(const FiniteTree& t, const std::set<GString>& w, std::size_t depth) {
    GenericityReport out;
    out.summary.name = "genericity";
    FiniteTree cut = t.restrict(depth);
    auto has_w_ext = [&](const GString& p) {
        for (const auto& e : cut.extensions(p))
            if (w.count(e)) return true;
        return false;
    };
    for (const auto& stub : cut.leaves()) {
        StubVerdict v = StubVerdict::Undecided;
        for (std::size_t n = 0; n <= stub.size(); ++n)
            if (w.count(stub.prefix(n))) v = StubVerdict::Meets;
        if (v != StubVerdict::Meets) {
            for (std::size_t n = 0; n <= stub.size(); ++n)
                if (!has_w_ext(stub.prefix(n))) {
                    v = StubVerdict::StronglyAvoids;
                    break;
                }
        }
        out.stubs.emplace_back(stub, v);
        if (v == StubVerdict::Undecided) out.summary.add_undecided("stub " + to_string(stub));
        else ++out.summary.pass;
    }
    return out;
}

CheckReport check_splitting(const SplittingInput& in) {
    CheckReport r{"splitting"};
    const auto& phi = *in.phi;
    const auto& gamma = *in.gamma;
    const Stage h = in.horizon;
    auto entered_by = [&](const GString& t, Stage st) {
        if (!in.entry_stage) return true;
        auto it = in.entry_stage->find(t);
        return it != in.entry_stage->end() && it->second < st;
    };
    for (const auto& [sigma, g] : gamma) {
        if (sigma.size() != 4 * in.index + 2 || sigma.size() <= in.l) continue;
        auto g0 = gamma.find(sigma.child(0));
        auto g1 = gamma.find(sigma.child(1));
        if (g0 != gamma.end() && g1 != gamma.end() &&
            incompatible(phi.eval(g0->second, h), phi.eval(g1->second, h))) {
            ++r.pass;
            continue;
        }
        auto ext = in.tree->extensions(g);
        std::optional<std::pair<GString, GString>> now, ever;
        for (std::size_t a = 0; a < ext.size() && !now; ++a)
            for (std::size_t b = a + 1; b < ext.size() && !now; ++b) {
                if (incompatible(phi.eval(ext[a], h), phi.eval(ext[b], h))) now = {ext[a], ext[b]};
                else if (!ever && incompatible(phi.eval_limit(ext[a]), phi.eval_limit(ext[b]))) ever = {ext[a], ext[b]};
            }
        if (!now) {
            if (ever) r.add_undecided("split above Gamma(" + to_string(sigma) + ") appears after the horizon");
            else ++r.pass;
            continue;
        }
        std::optional<Stage> t;
        if (in.last_attention) {
            auto it = in.last_attention->find(sigma);
            if (it != in.last_attention->end()) t = it->second;
        }
        bool visible = t && entered_by(now->first, *t) && entered_by(now->second, *t) &&
                       incompatible(phi.eval(now->first, *t), phi.eval(now->second, *t));
        if (visible || !in.last_attention)
            r.add_fail("split " + to_string(now->first) + " / " + to_string(now->second) + " above Gamma(" +
                       to_string(sigma) + ") was not captured");
        else
            r.add_undecided("split above Gamma(" + to_string(sigma) + ") not yet seen by an attention stage");
    }
    return r;
}

std::vector<CheckReport> check_result(const PulldownResult& r) {
    std::vector<CheckReport> out;
    out.push_back(check_expansionary(r.final_gamma, FiniteTree{}));
    out.push_back(check_identity_prefix(r.final_gamma, r.frozen));
    out.push_back(check_range(r.final_gamma, r.tree));
    out.push_back(check_permanence(r.entry_stage));
    out.push_back(check_nice(r.final_tree, r.depth));
    return out;
}

}  // namespace treepull
