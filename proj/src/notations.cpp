#include "treepull/notations.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <stdexcept>

namespace treepull {

// -------------------------------------------------------------------- terms

namespace {

struct SuccShape {
    const NotationTerm* base;
    Nat depth;
};

SuccShape succ_shape(const NotationTerm* t) {
    Nat d = 0;
    while (t->kind() == NotationKind::Succ) {
        t = t->inner().get();
        ++d;
    }
    return {t, d};
}

}  // namespace

Notation NotationTerm::zero() {
    static const Notation z = [] {
        auto t = std::make_shared<NotationTerm>();
        t->kind_ = NotationKind::Zero;
        t->key_ = "0";
        return Notation(t);
    }();
    return z;
}

Notation NotationTerm::succ(Notation inner) {
    auto t = std::make_shared<NotationTerm>();
    t->kind_ = NotationKind::Succ;
    auto shape = succ_shape(inner.get());
    t->key_ = shape.base->key() + "+" + std::to_string(shape.depth + 1);
    t->inner_ = std::move(inner);
    return t;
}

Notation NotationTerm::lim(std::string tag, Nat serial, SeqFn seq) {
    auto t = std::make_shared<NotationTerm>();
    t->kind_ = NotationKind::Lim;
    t->key_ = serial ? tag + "#" + std::to_string(serial) : tag;
    t->tag_ = std::move(tag);
    t->serial_ = serial;
    t->seq_ = std::move(seq);
    return t;
}

Notation NotationTerm::at(Nat n) const {
    if (kind_ != NotationKind::Lim) throw std::logic_error("at() on a non-limit notation");
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    Notation v = seq_(n);
    memo_.emplace(n, v);
    return v;
}

bool same_notation(const Notation& a, const Notation& b) { return a == b || a->key() == b->key(); }

Notation succ_n(Notation base, Nat n) {
    for (Nat i = 0; i < n; ++i) base = NotationTerm::succ(base);
    return base;
}

Notation nat_notation(Nat n) { return succ_n(NotationTerm::zero(), n); }

Notation core_of(Notation t) {
    while (t->kind() == NotationKind::Succ) t = t->inner();
    return t;
}

Notation o_add(const Notation& a, const Notation& b) {
    switch (b->kind()) {
        case NotationKind::Zero:
            return a;
        case NotationKind::Succ:
            return NotationTerm::succ(o_add(a, b->inner()));
        case NotationKind::Lim:
            break;
    }
    if (a->kind() == NotationKind::Zero) return b;
    static std::mutex mu;
    static std::map<std::pair<std::string, std::string>, Notation> cache;
    auto k = std::make_pair(a->key(), b->key());
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    Notation aa = a, bb = b;
    Notation v = NotationTerm::lim("(" + a->key() + ")+(" + b->key() + ")", 0,
                                   [aa, bb](Nat n) { return o_add(aa, bb->at(n)); });
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(k, v).first->second;
}

const char* to_string(OVerdict v) {
    switch (v) {
        case OVerdict::Less: return "less";
        case OVerdict::Geq: return "geq";
        case OVerdict::Unresolved: return "unresolved";
    }
    return "?";
}

namespace {

OVerdict o_less_rec(const Notation& a, Notation b, Nat budget) {
    // a <_O b forces |a| < |b|
    auto ha = height(a, budget);
    auto hb = height(b, budget);
    if (ha && hb && !(*ha < *hb)) return OVerdict::Geq;
    static std::mutex mu;
    static std::map<std::tuple<std::string, std::string, Nat>, OVerdict> cache;
    auto k = std::make_tuple(a->key(), b->key(), budget);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    OVerdict v = OVerdict::Unresolved;
    // successor descent on b is exhaustive
    while (v == OVerdict::Unresolved) {
        if (same_notation(a, b) || b->kind() == NotationKind::Zero) {
            v = OVerdict::Geq;
        } else if (b->kind() != NotationKind::Succ) {
            break;
        } else if (same_notation(a, b->inner())) {
            v = OVerdict::Less;
        } else {
            b = b->inner();
        }
    }
    for (Nat n = 0; n < budget && v == OVerdict::Unresolved; ++n) {
        Notation bn = b->at(n);
        if (same_notation(a, bn) || o_less_rec(a, bn, budget) == OVerdict::Less) v = OVerdict::Less;
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(k, v);
    return v;
}

}  // namespace

OVerdict o_less(const Notation& a, const Notation& b, Nat budget) { return o_less_rec(a, b, budget); }

// ------------------------------------------------------------------- height

namespace {

bool term_eq(const CnfTerm& a, const CnfTerm& b) {
    return a.coefficient == b.coefficient && *a.exponent == *b.exponent;
}

}  // namespace

std::optional<OrdinalCNF> cnf_limit(const std::vector<OrdinalCNF>& seq) {
    if (seq.size() < 3) return std::nullopt;
    std::size_t from = seq.size() / 2;
    for (std::size_t i = from; i + 1 < seq.size(); ++i)
        if (!(seq[i] < seq[i + 1])) return std::nullopt;
    const OrdinalCNF& b = seq[seq.size() - 2];
    const OrdinalCNF& c = seq.back();
    std::size_t p = 0;
    while (p < b.terms().size() && p < c.terms().size() && term_eq(b.terms()[p], c.terms()[p])) ++p;
    if (p >= b.terms().size() || p >= c.terms().size()) return std::nullopt;
    std::vector<CnfTerm> prefix(c.terms().begin(), c.terms().begin() + static_cast<std::ptrdiff_t>(p));
    OrdinalCNF head = OrdinalCNF::from_terms(prefix);
    // every tail element must share the prefix and have a term after it
    std::vector<OrdinalCNF> exps;
    std::vector<Nat> coefs;
    for (std::size_t i = from; i < seq.size(); ++i) {
        const auto& ts = seq[i].terms();
        if (ts.size() <= p) return std::nullopt;
        for (std::size_t j = 0; j < p; ++j)
            if (!term_eq(ts[j], prefix[j])) return std::nullopt;
        exps.push_back(*ts[p].exponent);
        coefs.push_back(ts[p].coefficient);
    }
    bool same_exp = true, rising_exp = true;
    for (std::size_t i = 0; i + 1 < exps.size(); ++i) {
        same_exp = same_exp && exps[i] == exps[i + 1];
        rising_exp = rising_exp && exps[i] < exps[i + 1];
    }
    if (same_exp) {
        for (std::size_t i = 0; i + 1 < coefs.size(); ++i)
            if (!(coefs[i] < coefs[i + 1])) return std::nullopt;
        return head + OrdinalCNF::omega_pow(exps.back().succ());
    }
    if (rising_exp) {
        auto e = cnf_limit(exps);
        if (!e) return std::nullopt;
        return head + OrdinalCNF::omega_pow(*e);
    }
    return std::nullopt;
}

namespace {

std::mutex height_mu;
std::map<std::pair<std::string, Nat>, std::optional<OrdinalCNF>> height_cache;

// uncached limit expansions allowed per top-level height query
constexpr std::size_t kHeightWork = 20000;

std::optional<OrdinalCNF> height_rec(const Notation& a, Nat budget, std::size_t& work) {
    auto k = std::make_pair(core_of(a)->key(), budget);
    {
        std::lock_guard<std::mutex> lock(height_mu);
        auto it = height_cache.find(k);
        if (it != height_cache.end()) {
            if (!it->second) return std::nullopt;
            return *it->second + OrdinalCNF::nat(succ_shape(a.get()).depth);
        }
    }
    std::optional<OrdinalCNF> core_h;
    Notation base = core_of(a);
    if (base->kind() == NotationKind::Zero) {
        core_h = OrdinalCNF{};
    } else {
        if (work == 0) return std::nullopt;  // not cached: the answer may still resolve later
        --work;
        std::vector<OrdinalCNF> hs;
        bool ok = true;
        for (Nat n = 0; n < budget && ok; ++n) {
            auto h = height_rec(base->at(n), budget, work);
            if (!h) ok = false;
            else hs.push_back(*h);
        }
        if (!ok && work == 0) return std::nullopt;
        if (ok) core_h = cnf_limit(hs);
    }
    {
        std::lock_guard<std::mutex> lock(height_mu);
        height_cache.emplace(k, core_h);
    }
    if (!core_h) return std::nullopt;
    return *core_h + OrdinalCNF::nat(succ_shape(a.get()).depth);
}

}  // namespace

std::optional<OrdinalCNF> height(const Notation& a, Nat budget) {
    std::size_t work = kHeightWork;
    return height_rec(a, budget, work);
}

// ------------------------------------------------------------------ catalog

namespace catalog {

namespace {
std::recursive_mutex cat_mu;
std::map<Nat, Notation> times_cache, pow_cache;
}  // namespace

Notation omega() {
    static const Notation w = NotationTerm::lim("w", 0, [](Nat n) { return nat_notation(n); });
    return w;
}

Notation omega_times(Nat k) {
    if (k == 0) return NotationTerm::zero();
    if (k == 1) return omega();
    std::lock_guard<std::recursive_mutex> lock(cat_mu);
    auto it = times_cache.find(k);
    if (it != times_cache.end()) return it->second;
    Notation v = o_add(omega_times(k - 1), omega());
    times_cache.emplace(k, v);
    return v;
}

namespace {

// omega^k * m by repeated addition
Notation pow_times(Nat k, Nat m) {
    if (m == 0) return NotationTerm::zero();
    Notation acc = omega_pow(k);
    for (Nat i = 1; i < m; ++i) acc = o_add(acc, omega_pow(k));
    return acc;
}

}  // namespace

Notation omega_pow(Nat k) {
    if (k == 0) return nat_notation(1);
    if (k == 1) return omega();
    if (k == 2) {
        static const Notation w2 = NotationTerm::lim("w^2", 0, [](Nat m) { return omega_times(m); });
        return w2;
    }
    std::lock_guard<std::recursive_mutex> lock(cat_mu);
    auto it = pow_cache.find(k);
    if (it != pow_cache.end()) return it->second;
    Notation v = NotationTerm::lim("w^" + std::to_string(k), 0, [k](Nat m) { return pow_times(k - 1, m); });
    pow_cache.emplace(k, v);
    return v;
}

Notation omega_omega() {
    static const Notation ww = NotationTerm::lim("w^w", 0, [](Nat n) { return omega_pow(n); });
    return ww;
}

std::optional<Notation> lookup(const std::string& name) {
    auto all_digits = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (name == "w") return omega();
    if (name == "w^w") return omega_omega();
    if (name.rfind("w*", 0) == 0 && all_digits(name.substr(2))) {
        Nat k = std::stoull(name.substr(2));
        if (k == 0) return std::nullopt;
        return omega_times(k);
    }
    if (name.rfind("w^", 0) == 0 && all_digits(name.substr(2))) {
        Nat k = std::stoull(name.substr(2));
        if (k == 0) return std::nullopt;
        return omega_pow(k);
    }
    return std::nullopt;
}

}  // namespace catalog

std::optional<Notation> parse_notation(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "0") return NotationTerm::zero();
    if (t.rfind("succ(", 0) == 0 && t.back() == ')') {
        auto inner = parse_notation(t.substr(5, t.size() - 6));
        if (!inner) return std::nullopt;
        return NotationTerm::succ(*inner);
    }
    if (t.rfind("lim:", 0) == 0) return catalog::lookup(t.substr(4));
    return std::nullopt;
}

std::string render_notation(const Notation& t) {
    auto shape = succ_shape(t.get());
    std::string base = shape.base->kind() == NotationKind::Zero ? "0" : "lim:" + shape.base->key();
    for (Nat i = 0; i < shape.depth; ++i) base = "succ(" + base + ")";
    return base;
}

// ---------------------------------------------------------------------- rho

struct Rho::Shared {
    std::shared_ptr<const FiniteTree> tree;
    std::string tag;
    std::map<GString, Nat> serial;
    GString bottom;  // eta(eps)
    std::recursive_mutex mu;
    std::map<GString, Notation> memo;
};

namespace {

std::string tree_fingerprint(const FiniteTree& t) {
    std::size_t h = 14695981039346656037ull;
    for (const auto& m : t.members()) h = h * 1099511628211ull ^ GStringHash{}(m);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (int i = 0; i < 16; ++i) out += hex[(h >> (4 * i)) & 15];
    return out;
}

Notation rho_at(const std::shared_ptr<Rho::Shared>& sh, const GString& s);

}  // namespace

std::optional<GString> Rho::kb_pred_leaf(const FiniteTree& t, const GString& s) {
    if (t.contains(s) || !in_plus(t, s)) return std::nullopt;
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] == 0) --i;
    if (i == 0) return std::nullopt;  // all zeros: eta(eps)
    return s.prefix(i - 1).child(s[i - 1] - 1);
}

namespace {

Notation rho_at(const std::shared_ptr<Rho::Shared>& sh, const GString& s) {
    std::lock_guard<std::recursive_mutex> lock(sh->mu);
    auto it = sh->memo.find(s);
    if (it != sh->memo.end()) return it->second;
    const FiniteTree& t = *sh->tree;
    if (!in_plus(t, s)) throw std::invalid_argument("rho: " + to_string(s) + " is outside T+");
    Notation v;
    if (t.contains(s)) {
        std::weak_ptr<Rho::Shared> weak = sh;
        v = NotationTerm::lim(sh->tag, sh->serial.at(s), [weak, s](Nat n) {
            auto strong = weak.lock();
            if (!strong) throw std::logic_error("rho notation used after its tree was released");
            return rho_at(strong, s.child(n));
        });
    } else if (s == sh->bottom) {
        v = NotationTerm::zero();
    } else {
        // walk down the successor chain iteratively to keep recursion shallow
        std::vector<GString> chain{s};
        Notation base;
        while (true) {
            auto p = Rho::kb_pred_leaf(t, chain.back());
            if (!p) throw std::logic_error("rho: no KB predecessor for " + to_string(chain.back()));
            auto hit = sh->memo.find(*p);
            if (hit != sh->memo.end()) {
                base = hit->second;
                break;
            }
            if (t.contains(*p) || *p == sh->bottom) {
                base = rho_at(sh, *p);
                break;
            }
            chain.push_back(*p);
        }
        for (auto rit = chain.rbegin(); rit != chain.rend(); ++rit) {
            base = NotationTerm::succ(base);
            sh->memo.emplace(*rit, base);
        }
        return base;
    }
    sh->memo.emplace(s, v);
    return v;
}

}  // namespace

Rho::Rho(FiniteTree t) : tree_(std::make_shared<const FiniteTree>(std::move(t))), shared_(std::make_shared<Shared>()) {
    shared_->tree = tree_;
    shared_->tag = "rho@" + tree_fingerprint(*tree_);
    std::vector<GString> nodes(tree_->members().begin(), tree_->members().end());
    std::sort(nodes.begin(), nodes.end(), code_less);
    for (std::size_t i = 0; i < nodes.size(); ++i) shared_->serial.emplace(nodes[i], i + 1);
    shared_->bottom = eta(*tree_, GString{});
}

Notation Rho::at(const GString& s) const { return rho_at(shared_, s); }

Rho rho(const FiniteTree& t) { return Rho(t); }

// --------------------------------------------------------- notation_to_tree

NotationTree notation_to_tree(const Notation& a, Nat stages, Nat budget) {
    if (a->kind() != NotationKind::Lim) throw std::invalid_argument("notation_to_tree needs a limit notation");
    NotationTree out;
    out.tree.insert(GString{});
    out.labels.emplace(GString{}, a);
    out.entered_at.emplace(GString{}, 0);
    std::map<GString, Nat> last_child;  // label index of the newest child
    for (Nat s = 1; s < stages; ++s) {
        // codes below s that are not in U are excluded from now on, so any
        // new child must have code >= s
        std::vector<GString> nodes(out.tree.members().begin(), out.tree.members().end());
        std::sort(nodes.begin(), nodes.end(), code_less);
        for (const auto& sigma : nodes) {
            const Notation& beta = out.labels.at(sigma);
            Notation gamma = NotationTerm::zero();
            auto lc = last_child.find(sigma);
            if (lc != last_child.end()) gamma = out.labels.at(sigma.child(lc->second));
            std::optional<Nat> hit;
            for (Nat m = 0; m < s; ++m) {
                Notation core = core_of(beta->at(m));
                if (core->kind() == NotationKind::Zero) continue;
                if (o_less(gamma, core, budget) == OVerdict::Less) {
                    hit = m;
                    break;
                }
            }
            if (!hit) continue;
            Nat l = lc == last_child.end() ? 0 : lc->second + 1;
            while (sigma.child(l).code() < s) ++l;
            GString c = sigma.child(l);
            out.tree.insert(c);
            out.labels.emplace(c, core_of(beta->at(*hit)));
            out.entered_at.emplace(c, s);
            last_child[sigma] = l;
        }
    }
    return out;
}

}  // namespace treepull
