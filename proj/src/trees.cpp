#include "treepull/trees.hpp"

#include <algorithm>
#include <deque>
#include <regex>

namespace treepull {

// ---------------------------------------------------------------- FiniteTree

FiniteTree FiniteTree::closure_of(const std::vector<GString>& strings, std::size_t* added) {
    FiniteTree t;
    std::set<GString> given(strings.begin(), strings.end());
    for (const auto& s : strings) t.insert(s);
    if (added) {
        std::size_t n = 0;
        for (const auto& m : t.members_) n += given.count(m) ? 0 : 1;
        *added = n;
    }
    return t;
}

void FiniteTree::insert(const GString& s) {
    for (std::size_t n = s.size() + 1; n-- > 0;) {
        if (!members_.insert(s.prefix(n)).second) break;
    }
}

std::size_t FiniteTree::height() const {
    std::size_t h = 0;
    for (const auto& m : members_) h = std::max(h, m.size());
    return h;
}

FiniteTree FiniteTree::restrict(std::size_t n) const {
    FiniteTree out;
    for (const auto& m : members_)
        if (m.size() <= n) out.members_.insert(m);
    return out;
}

std::vector<Nat> FiniteTree::child_labels(const GString& s) const {
    std::vector<Nat> out;
    for (auto it = members_.upper_bound(s); it != members_.end() && extends(*it, s); ++it) {
        if (it->size() == s.size() + 1) out.push_back(it->back());
    }
    return out;
}

std::vector<GString> FiniteTree::extensions(const GString& s) const {
    std::vector<GString> out;
    for (auto it = members_.lower_bound(s); it != members_.end() && extends(*it, s); ++it) out.push_back(*it);
    return out;
}

std::vector<GString> FiniteTree::leaves() const {
    std::vector<GString> out;
    for (auto it = members_.begin(); it != members_.end(); ++it) {
        auto nx = std::next(it);
        if (nx == members_.end() || !proper_extends(*nx, *it)) out.push_back(*it);
    }
    return out;
}

// ------------------------------------------------------------------ LazyTree

LazyTree::LazyTree(Membership m, std::size_t depth_budget, Nat branch_budget)
    : membership_(std::move(m)), depth_(depth_budget), branch_(branch_budget), memo_(std::make_shared<Memo>()) {}

bool LazyTree::contains(const GString& s) const {
    if (s.size() > depth_) throw BudgetExceeded("depth budget exceeded at " + to_string(s));
    for (Nat x : s.entries())
        if (x > branch_) throw BudgetExceeded("branch budget exceeded at " + to_string(s));
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->seen.find(s);
        if (it != memo_->seen.end()) return it->second;
    }
    bool parent_in = s.empty() ? true : contains(predecessor(s));
    bool v = membership_(s);
    if (v && !parent_in) throw DownwardClosureError(s);
    std::lock_guard<std::mutex> lock(memo_->mu);
    memo_->seen.emplace(s, v);
    return v;
}

FiniteTree LazyTree::materialize() const {
    FiniteTree out;
    if (!contains(GString{})) return out;
    std::deque<GString> queue{GString{}};
    while (!queue.empty()) {
        GString s = queue.front();
        queue.pop_front();
        out.insert(s);
        if (s.size() == depth_) continue;
        for (Nat x = 0; x <= branch_; ++x) {
            GString c = s.child(x);
            if (contains(c)) queue.push_back(c);
        }
    }
    return out;
}

// ------------------------------------------------------------------ KB order

bool kb_less(const GString& a, const GString& b) { return proper_extends(a, b) || left_of(a, b); }

// ------------------------------------------------------------------ niceness

namespace {

bool level3(std::size_t len) { return len % 4 == 3; }

}  // namespace

NiceReport is_nice(const FiniteTree& t, std::size_t depth) {
    for (const auto& m : t.members()) {
        if (m.size() <= depth && level3(m.size()) && m.back() > 1) return {false, m};
    }
    for (const auto& m : t.members()) {
        if (m.size() % 4 != 2 || m.size() + 1 > depth) continue;
        for (Nat x : {Nat{0}, Nat{1}}) {
            if (!t.contains(m.child(x))) return {false, m.child(x)};
        }
    }
    return {};
}

NiceReport is_nice(const LazyTree& t, std::size_t depth) {
    depth = std::min(depth, t.depth_budget());
    if (!t.contains(GString{})) return {};
    std::deque<GString> queue{GString{}};
    while (!queue.empty()) {
        GString s = queue.front();
        queue.pop_front();
        if (s.size() >= depth) continue;
        for (Nat x = 0; x <= t.branch_budget(); ++x) {
            GString c = s.child(x);
            bool in = t.contains(c);
            if (level3(c.size())) {
                if (in && x > 1) return {false, c};
                if (!in && x <= 1) return {false, c};
            }
            if (in) queue.push_back(c);
        }
    }
    return {};
}

FiniteTree nice_closure(const FiniteTree& t, std::size_t depth) {
    std::vector<GString> keep;
    for (const auto& m : t.members()) {
        bool bad = false;
        for (std::size_t i = 2; i < m.size() && i < depth; i += 4) bad = bad || m[i] > 1;
        if (!bad) keep.push_back(m);
    }
    FiniteTree out = FiniteTree::closure_of(keep);
    for (const auto& m : keep) {
        if (m.size() % 4 == 2 && m.size() < depth) {
            out.insert(m.child(0));
            out.insert(m.child(1));
        }
    }
    return out;
}

NiceEmbedding nice_embed(const FiniteTree& t) {
    NiceEmbedding out;
    if (t.empty()) return out;
    // members are visited parent-first in lexicographic order
    for (const auto& m : t.members()) {
        if (m.empty()) {
            out.map.emplace(m, m);
            out.tree.insert(m);
            continue;
        }
        const GString& base = out.map.at(predecessor(m));
        GString block = base.child(m.back()).child(0);
        GString img = block.child(0).child(0);
        out.map.emplace(m, img);
        out.tree.insert(img);
        out.tree.insert(block.child(1));
    }
    return out;
}

// ------------------------------------------------------------- eta, kb_succ

GString eta(const FiniteTree& t, const GString& s) {
    GString out = s;
    while (t.contains(out)) out = out.child(0);
    return out;
}

bool in_plus(const FiniteTree& t, const GString& s) {
    if (t.contains(s)) return true;
    return !s.empty() && t.contains(predecessor(s));
}

GString kb_succ(const FiniteTree& t, const GString& s) {
    if (!in_plus(t, s)) throw std::invalid_argument("kb_succ: " + to_string(s) + " is outside T+");
    if (s.empty()) return eta(t, s);
    return eta(t, predecessor(s).child(s.back() + 1));
}

// -------------------------------------------------------------------- KbRank

KbRank::KbRank(FiniteTree t) : tree_(std::move(t)) {}

OrdinalCNF KbRank::block(const GString& s) const {
    if (!tree_.contains(s)) return OrdinalCNF::nat(1);
    return sub(s).succ();
}

OrdinalCNF KbRank::sub(const GString& s) const {
    auto it = sub_memo_.find(s);
    if (it != sub_memo_.end()) return it->second;
    OrdinalCNF acc;
    Nat next = 0;
    for (Nat c : tree_.child_labels(s)) {
        acc = acc + OrdinalCNF::nat(c - next);
        acc = acc + block(s.child(c));
        next = c + 1;
    }
    acc = acc + OrdinalCNF::omega();
    sub_memo_.emplace(s, acc);
    return acc;
}

OrdinalCNF KbRank::left_part(const GString& s) const {
    OrdinalCNF acc;
    for (std::size_t i = 0; i < s.size(); ++i) {
        GString rho = s.prefix(i);
        Nat j = s[i];
        Nat next = 0;
        for (Nat c : tree_.child_labels(rho)) {
            if (c >= j) break;
            acc = acc + OrdinalCNF::nat(c - next);
            acc = acc + block(rho.child(c));
            next = c + 1;
        }
        acc = acc + OrdinalCNF::nat(j - next);
    }
    return acc;
}

OrdinalCNF KbRank::at(const GString& s) const {
    if (!in_plus(tree_, s)) throw std::invalid_argument("kb_rank: " + to_string(s) + " is outside T+");
    OrdinalCNF r = left_part(s);
    if (tree_.contains(s)) r = r + sub(s);
    return r;
}

KbRank kb_rank(const FiniteTree& t) { return KbRank(t); }

// ---------------------------------------------------------------- KBFragment

KBFragment::KBFragment(FiniteTree base, Nat branch_budget) : base_(std::move(base)), budget_(branch_budget) {
    std::set<GString> all(base_.members().begin(), base_.members().end());
    for (const auto& m : base_.members())
        for (Nat n = 0; n <= budget_; ++n) all.insert(m.child(n));
    order_.assign(all.begin(), all.end());
    std::sort(order_.begin(), order_.end(), kb_less);
    for (std::size_t i = 0; i < order_.size(); ++i) index_.emplace(order_[i], i);
}

bool KBFragment::contains(const GString& s) const { return index_.count(s) != 0; }

std::size_t KBFragment::index_of(const GString& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw std::invalid_argument("not in fragment: " + to_string(s));
    return it->second;
}

// ---------------------------------------------------------------- generators

FiniteTree full_binary(std::size_t d) {
    FiniteTree t;
    std::vector<GString> frontier{GString{}};
    t.insert(GString{});
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<GString> next;
        for (const auto& s : frontier)
            for (Nat x : {Nat{0}, Nat{1}}) {
                next.push_back(s.child(x));
                t.insert(next.back());
            }
        frontier.swap(next);
    }
    return t;
}

FiniteTree single_path(std::size_t d) {
    FiniteTree t;
    t.insert(GString(std::vector<Nat>(d, 0)));
    return t;
}

FiniteTree two_path(std::size_t d) {
    FiniteTree t;
    t.insert(GString(std::vector<Nat>(d, 0)));
    if (d) t.insert(GString(std::vector<Nat>(d, 1)));
    return t;
}

FiniteTree finitely_many_ones(std::size_t d) {
    // binary strings with at most one entry equal to 1
    FiniteTree t;
    for (std::size_t pos = 0; pos <= d; ++pos) {
        std::vector<Nat> xs(d, 0);
        if (pos < d) xs[pos] = 1;
        t.insert(GString(xs));
    }
    return t;
}

std::optional<FiniteTree> tree_from_generator(const std::string& text) {
    static const std::regex re(R"(\s*([a-z-]+)\s*\(\s*(\d+)\s*\)\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) return std::nullopt;
    std::size_t d = std::stoul(m[2].str());
    const std::string name = m[1].str();
    if (name == "full-binary") return full_binary(d);
    if (name == "single-path") return single_path(d);
    if (name == "two-path") return two_path(d);
    if (name == "finitely-many-ones") return finitely_many_ones(d);
    return std::nullopt;
}

}  // namespace treepull
