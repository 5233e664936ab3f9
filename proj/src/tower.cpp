#include "treepull/tower.hpp"

#include <algorithm>
#include <stdexcept>

namespace treepull {

// ------------------------------------------------------------ copy lengths

std::size_t copy_len(const FiniteTree& u, const GString& sigma) {
    if (!sigma.empty() && !u.contains(predecessor(sigma)))
        throw std::invalid_argument("copy_len: " + to_string(sigma) + " is outside the fragment");
    if (sigma.empty() && u.empty()) throw std::invalid_argument("copy_len: empty fragment");
    std::size_t l = 0;
    for (Nat x : sigma.entries()) l += 4 * (x + 1);
    return l;
}

std::size_t copy_len_pair(const FiniteTree& u, const GString& sigma_in, const GString& tau_in) {
    if (!kb_less(tau_in, sigma_in))
        throw std::invalid_argument("copy_len_pair: " + to_string(tau_in) + " is not KB below " +
                                    to_string(sigma_in));
    copy_len(u, sigma_in);
    copy_len(u, tau_in);
    // sigma and tau stay prefixes of the inputs; track their lengths only
    const auto& se = sigma_in.entries();
    const auto& te = tau_in.entries();
    std::size_t m = 0;
    while (m < se.size() && m < te.size() && se[m] == te[m]) ++m;
    std::size_t ls = se.size(), lt = te.size();
    for (;;) {
        const std::size_t tp = lt - 1;
        const bool tp_is_sigma = tp == ls && ls <= m;
        const bool siblings = ls > 0 && tp == ls - 1 && tp <= m;
        if (tp_is_sigma || siblings) {
            std::size_t l = 0;
            for (std::size_t i = 0; i < lt; ++i) l += 4 * (te[i] + 1);
            return l;
        }
        if (tp > std::min({m, ls, lt}))
            lt = tp;
        else
            --ls;
    }
}

CopyLenTable copy_len_table(const FiniteTree& u, Nat branch) {
    CopyLenTable t;
    t.u = u;
    t.branch = branch;
    t.order = KBFragment(u, branch).order();
    for (const auto& s : t.order) t.l[s] = copy_len(u, s);
    for (std::size_t a = 0; a < t.order.size(); ++a)
        for (std::size_t g = 0; g < a; ++g) t.l_pair[{t.order[a], t.order[g]}] = copy_len_pair(u, t.order[a], t.order[g]);
    return t;
}

CheckReport check_acceptable(const CopyLenTable& table) {
    CheckReport r("acceptable");
    constexpr std::size_t kMaxMessages = 20;
    auto note = [&](const std::string& m) {
        if (r.messages.size() < kMaxMessages)
            r.add_fail(m);
        else
            ++r.fail;
    };
    auto pair = [&](const GString& s, const GString& t) -> std::optional<std::size_t> {
        auto it = table.l_pair.find({s, t});
        if (it == table.l_pair.end()) return std::nullopt;
        return it->second;
    };
    // (1) along each node's fan
    for (const auto& a : table.u.members()) {
        for (Nat n = 0; n < table.branch; ++n) {
            auto lo = pair(a, a.child(n));
            auto hi = pair(a, a.child(n + 1));
            if (!lo || !hi) {
                note("missing entry on the fan of " + to_string(a));
                continue;
            }
            if (*hi > *lo)
                ++r.pass;
            else
                note("fan of " + to_string(a) + " does not increase at " + std::to_string(n + 1));
        }
    }
    // (2) gamma <=KB gamma' <KB alpha' <=KB alpha
    const auto& ord = table.order;
    const std::size_t n = ord.size();
    std::vector<std::vector<std::optional<std::size_t>>> p(n, std::vector<std::optional<std::size_t>>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t g = 0; g < a; ++g) {
            p[a][g] = pair(ord[a], ord[g]);
            if (!p[a][g]) note("missing entry (" + to_string(ord[a]) + ", " + to_string(ord[g]) + ")");
        }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t g = 0; g < a; ++g) {
            if (!p[a][g]) continue;
            for (std::size_t g2 = g; g2 < a; ++g2)
                for (std::size_t a2 = g2 + 1; a2 <= a; ++a2) {
                    if (!p[a2][g2]) continue;
                    if (*p[a2][g2] >= *p[a][g]) {
                        ++r.pass;
                        continue;
                    }
                    note("quadruple gamma=" + to_string(ord[g]) + " gamma'=" + to_string(ord[g2]) +
                         " alpha'=" + to_string(ord[a2]) + " alpha=" + to_string(ord[a]));
                }
        }
    return r;
}

// ------------------------------------------------------------ uniformize

Uniformized::Uniformized(Evaluator ev, UniformSchedule sched, std::optional<FrozenPrefix> frozen)
    : ev_(std::move(ev)), sched_(std::move(sched)), frozen_(std::move(frozen)) {
    if (sched_.l.empty()) throw std::invalid_argument("uniformize: empty schedule");
    for (std::size_t i = 1; i < sched_.l.size(); ++i)
        if (sched_.l[i] <= sched_.l[i - 1])
            throw std::invalid_argument("uniformize: schedule is not strictly monotone at " + std::to_string(i));
    if (!sched_.u.empty() && sched_.u.size() != sched_.l.size())
        throw std::invalid_argument("uniformize: step bounds do not match the schedule");
    if (frozen_ && frozen_->depth >= sched_.l.front())
        throw std::invalid_argument("uniformize: frozen depth must lie below l_0");
}

bool Uniformized::visible(const Evaluation& e, std::size_t n) const {
    if (e.accept || e.use_column > n) return false;
    Nat bound = sched_.u.empty() ? sched_.l[n] : sched_.u[n];
    return e.steps <= bound;
}

std::size_t Uniformized::level_of(const GString& sigma) const {
    for (std::size_t n = 0; n < sched_.l.size(); ++n)
        if (sched_.l[n] >= sigma.size()) return n;
    throw BudgetExceeded("uniformize: " + to_string(sigma) + " is deeper than the schedule");
}

bool Uniformized::contains_at(const GString& sigma, std::size_t n) const {
    if (sigma.size() > sched_.l.at(n)) return false;
    for (std::size_t k = 0; k <= sigma.size(); ++k) {
        GString rho = sigma.prefix(k);
        if (frozen_ && k <= frozen_->depth) {
            if (!frozen_->prefix.contains(rho)) return false;
            continue;
        }
        if (k % 4 == 3) {
            // keep both 0 and 1 children; a rejection here only cuts extensions
            if (rho.back() > 1) return false;
            if (k < sigma.size() && visible(ev_(rho), n)) return false;
            continue;
        }
        if (visible(ev_(rho), n)) return false;
    }
    return true;
}

bool Uniformized::contains(const GString& sigma) const { return contains_at(sigma, level_of(sigma)); }

LazyTree Uniformized::lazy(Nat branch) const {
    Uniformized self = *this;
    return LazyTree([self](const GString& s) { return self.contains(s); }, sched_.l.back(), branch);
}

FiniteTree Uniformized::level_tree(std::size_t n, Nat branch) const {
    FiniteTree t;
    if (!contains_at(GString{}, n)) return t;
    std::vector<GString> frontier{GString{}};
    t.insert(GString{});
    while (!frontier.empty()) {
        std::vector<GString> next;
        for (const auto& s : frontier)
            for (Nat x = 0; x <= branch; ++x) {
                GString c = s.child(x);
                if (contains_at(c, n)) {
                    t.insert(c);
                    next.push_back(c);
                }
            }
        frontier.swap(next);
    }
    return t;
}

Evaluator tree_evaluator(const FiniteTree& t) {
    return [t](const GString& s) {
        Evaluation e;
        e.accept = t.contains(s);
        return e;
    };
}

// ------------------------------------------------------------ towers

const TowerLevel& TowerBundle::level(const GString& node) const {
    auto it = levels.find(node);
    if (it == levels.end()) throw std::invalid_argument("no tower level " + to_string(node));
    return it->second;
}

std::optional<GString> TowerBundle::kb_pred(const GString& node) const {
    auto it = std::find(order.begin(), order.end(), node);
    if (it == order.end() || it == order.begin()) return std::nullopt;
    return *(it - 1);
}

TowerBundle build_tower(const FiniteTree& u, Nat branch, const FiniteTree& top, const TowerOptions& opt) {
    TowerBundle b;
    b.u = u;
    b.branch = branch;
    b.order = KBFragment(u, branch).order();
    std::size_t max_l = 0;
    for (const auto& s : b.order) max_l = std::max(max_l, copy_len(u, s));
    b.depth = opt.depth.value_or(max_l + 8);

    const GString root;
    if (auto rep = is_nice(top, b.depth); !rep.nice)
        throw TowerError(root, "top tree is not nice at " + to_string(*rep.counterexample));
    TowerLevel t;
    t.node = root;
    t.tree = top.restrict(b.depth);
    b.levels.emplace(root, std::move(t));

    for (std::size_t i = b.order.size() - 1; i-- > 0;) {
        const GString& node = b.order[i];
        const GString& succ = b.order[i + 1];
        TowerLevel lv;
        lv.node = node;
        lv.copy_len = copy_len(u, node);
        lv.up = succ;
        try {
            PulldownScenario sc;
            sc.l = lv.copy_len;
            sc.tprime = StagedTree(b.levels.at(succ).tree, sc.l, {});
            sc.frozen = b.levels.at(predecessor(node)).tree.restrict(sc.l);
            sc.stages = opt.stages;
            sc.depth = b.depth;
            PulldownResult r = run_pulldown(sc);
            lv.tree = std::move(r.final_tree);
            lv.gamma_up = std::move(r.final_gamma);
            lv.log = std::move(r.log);
        } catch (const ValidationError& e) {
            throw TowerError(node, e.what());
        } catch (const FixtureError& e) {
            throw TowerError(node, e.what());
        }
        b.levels.emplace(node, std::move(lv));
    }
    return b;
}

TowerBundle build_tower_height(std::size_t k, const FiniteTree& top, const TowerOptions& opt) {
    if (k == 0) throw std::invalid_argument("tower height must be positive");
    return build_tower(FiniteTree::closure_of({GString{}}), k - 1, top, opt);
}

std::optional<GString> tower_gamma(const TowerBundle& b, const GString& vartheta, const GString& theta,
                                   const GString& sigma) {
    if (theta == vartheta) return sigma;
    if (!kb_less(theta, vartheta))
        throw std::invalid_argument("tower_gamma: " + to_string(theta) + " is not KB below " + to_string(vartheta));
    GString via;
    auto p = b.kb_pred(vartheta);
    if (!p) throw std::invalid_argument("tower_gamma: " + to_string(vartheta) + " has no predecessor");
    via = *p;
    if (b.is_u_node(vartheta)) {
        // the predecessor of a node is its last child in the fragment
        for (Nat n = 0; n <= via.back(); ++n) {
            GString c = vartheta.child(n);
            if (kb_less(theta, c) && sigma.size() < n) return tower_gamma(b, c, theta, sigma);
        }
    }
    auto x = tower_gamma(b, via, theta, sigma);
    if (!x) return std::nullopt;
    const auto& g = b.level(via).gamma_up;
    auto it = g.find(*x);
    if (it == g.end()) return std::nullopt;
    return it->second;
}

namespace {

void merge(CheckReport& into, const CheckReport& from, const std::string& where) {
    into.pass += from.pass;
    into.fail += from.fail;
    into.undecided += from.undecided;
    for (const auto& m : from.messages) into.messages.push_back(where + ": " + m);
}

std::vector<GString> domain(const TowerBundle& b, const GString& node) {
    std::vector<GString> out;
    for (const auto& s : b.level(node).tree.members())
        if (s.size() <= b.depth) out.push_back(s);
    return out;
}

}  // namespace

CheckReport check_composition(const TowerBundle& b) {
    CheckReport r("composition");
    const auto& ord = b.order;
    for (std::size_t i = 0; i < ord.size(); ++i)
        for (std::size_t j = i + 1; j < ord.size(); ++j)
            for (std::size_t k = j + 1; k < ord.size(); ++k)
                for (const auto& s : domain(b, ord[i])) {
                    auto direct = tower_gamma(b, ord[k], ord[i], s);
                    auto mid = tower_gamma(b, ord[j], ord[i], s);
                    std::optional<GString> via;
                    if (mid) via = tower_gamma(b, ord[k], ord[j], *mid);
                    const std::string where = to_string(ord[i]) + " -> " + to_string(ord[j]) + " -> " +
                                              to_string(ord[k]) + " at " + to_string(s);
                    if (direct && via) {
                        if (*direct == *via)
                            ++r.pass;
                        else
                            r.add_fail(where + ": " + to_string(*direct) + " vs " + to_string(*via));
                    } else if (direct || via) {
                        r.add_undecided(where + ": one side undefined");
                    }
                }
    return r;
}

CheckReport check_copy_agreement(const TowerBundle& b) {
    CheckReport r("copy-agreement");
    const auto& ord = b.order;
    for (std::size_t s = 0; s < ord.size(); ++s)
        for (std::size_t t = 0; t < s; ++t) {
            std::size_t l = std::min(copy_len_pair(b.u, ord[s], ord[t]), b.depth);
            FiniteTree a = b.level(ord[t]).tree.restrict(l);
            FiniteTree c = b.level(ord[s]).tree.restrict(l);
            if (a == c) {
                ++r.pass;
                continue;
            }
            GString w;
            for (const auto& m : a.members())
                if (!c.contains(m)) {
                    w = m;
                    break;
                }
            if (w.empty())
                for (const auto& m : c.members())
                    if (!a.contains(m)) {
                        w = m;
                        break;
                    }
            r.add_fail("T_" + to_string(ord[t]) + " and T_" + to_string(ord[s]) + " differ below " +
                       std::to_string(l) + " at " + to_string(w));
        }
    return r;
}

CheckReport check_identity_below_copy(const TowerBundle& b) {
    CheckReport r("identity-below-copy");
    for (const auto& [node, lv] : b.levels) {
        if (!lv.up) continue;
        for (const auto& s : lv.tree.members()) {
            if (s.size() > lv.copy_len) continue;
            auto it = lv.gamma_up.find(s);
            if (it != lv.gamma_up.end() && it->second == s)
                ++r.pass;
            else
                r.add_fail("level " + to_string(node) + " moves " + to_string(s));
        }
    }
    return r;
}

CheckReport check_tower_expansionary(const TowerBundle& b) {
    CheckReport r("expansionary");
    for (const auto& [node, lv] : b.levels)
        if (lv.up) merge(r, check_expansionary(lv.gamma_up, lv.tree), "level " + to_string(node));
    return r;
}

namespace {

bool split_above(const std::set<GString>& strings, const GString& rho, const StagedFunctional& phi) {
    std::vector<GString> outs;
    for (auto it = strings.lower_bound(rho); it != strings.end() && extends(*it, rho); ++it) {
        GString o = phi.eval_limit(*it);
        if (!o.empty()) outs.push_back(o);
    }
    for (std::size_t i = 0; i < outs.size(); ++i)
        for (std::size_t j = i + 1; j < outs.size(); ++j)
            if (incompatible(outs[i], outs[j])) return true;
    return false;
}

}  // namespace

CheckReport check_splitting_propagation(const TowerBundle& b, const StagedFunctional& phi, const GString& stub) {
    CheckReport r("splitting-propagation");
    if (phi.empty()) {
        ++r.pass;
        return r;
    }
    const GString top = b.order.back();
    std::set<GString> top_tree;
    for (const auto& s : b.level(top).tree.members())
        if (s.size() <= b.depth) top_tree.insert(s);

    std::map<GString, std::set<GString>> images;
    for (std::size_t i = 0; i + 1 < b.order.size(); ++i) {
        const GString& beta = b.order[i];
        auto& img = images[beta];
        for (const auto& s : domain(b, beta))
            if (auto v = tower_gamma(b, top, beta, s))
                for (std::size_t k = 0; k <= v->size(); ++k) img.insert(v->prefix(k));
    }

    std::vector<GString> prefixes;
    for (std::size_t k = 0; k <= stub.size(); ++k) prefixes.push_back(stub.prefix(k));
    bool concl = true;
    GString missing;
    for (const auto& rho : prefixes)
        if (!split_above(top_tree, rho, phi)) {
            concl = false;
            missing = rho;
            break;
        }

    for (std::size_t i = 0; i + 1 < b.order.size(); ++i) {
        const GString& beta = b.order[i];
        bool hyp = true;
        std::string gap;
        for (std::size_t j = i; j + 1 < b.order.size() && hyp; ++j)
            for (const auto& rho : prefixes)
                if (!split_above(images[b.order[j]], rho, phi)) {
                    hyp = false;
                    gap = "no split above " + to_string(rho) + " in the image of level " + to_string(b.order[j]);
                    break;
                }
        if (!hyp)
            r.add_undecided("level " + to_string(beta) + ": " + gap + " within depth " + std::to_string(b.depth));
        else if (concl)
            ++r.pass;
        else
            r.add_fail("level " + to_string(beta) + ": top tree has no split above " + to_string(missing));
    }
    return r;
}

}  // namespace treepull
