#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treepull/ordinal.hpp"
#include "treepull/strings.hpp"

namespace treepull {

// Downward closed finite set of strings.
class FiniteTree {
public:
    FiniteTree() = default;

    // Downward closure of the given strings. `added` (optional) receives the
    // number of prefixes that had to be filled in.
    static FiniteTree closure_of(const std::vector<GString>& strings, std::size_t* added = nullptr);

    bool contains(const GString& s) const { return members_.count(s) != 0; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    std::size_t height() const;
    const std::set<GString>& members() const& { return members_; }
    std::set<GString> members() && { return std::move(members_); }

    // inserts s together with all of its prefixes
    void insert(const GString& s);
    FiniteTree restrict(std::size_t n) const;
    std::vector<Nat> child_labels(const GString& s) const;
    // members extending s (s included when present), in lexicographic order
    std::vector<GString> extensions(const GString& s) const;
    std::vector<GString> leaves() const;

    friend bool operator==(const FiniteTree& a, const FiniteTree& b) { return a.members_ == b.members_; }

private:
    std::set<GString> members_;
};

class DownwardClosureError : public std::runtime_error {
public:
    DownwardClosureError(const GString& s)
        : std::runtime_error("downward closure violated at " + to_string(s)), witness(s) {}
    GString witness;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Membership callback with depth and branching budgets. Queries are memoized
// and checked against the parent's answer.
class LazyTree {
public:
    using Membership = std::function<bool(const GString&)>;

    LazyTree(Membership m, std::size_t depth_budget, Nat branch_budget);

    bool contains(const GString& s) const;
    std::size_t depth_budget() const { return depth_; }
    Nat branch_budget() const { return branch_; }
    FiniteTree materialize() const;

private:
    Membership membership_;
    std::size_t depth_;
    Nat branch_;
    struct Memo {
        std::mutex mu;
        std::unordered_map<GString, bool, GStringHash> seen;
    };
    std::shared_ptr<Memo> memo_;
};

bool kb_less(const GString& a, const GString& b);

struct NiceReport {
    bool nice = true;
    std::optional<GString> counterexample;
};

NiceReport is_nice(const FiniteTree& t, std::size_t depth);
NiceReport is_nice(const LazyTree& t, std::size_t depth);

// Adds the {0,1} children at lengths = 2 (mod 4) and drops other children
// there, up to `depth`.
FiniteTree nice_closure(const FiniteTree& t, std::size_t depth);

struct NiceEmbedding {
    FiniteTree tree;
    std::map<GString, GString> map;
};

// Each edge labelled x becomes the block x,0,{0,1},0; the 1 sibling at the
// third position stays a leaf.
NiceEmbedding nice_embed(const FiniteTree& t);

GString eta(const FiniteTree& t, const GString& s);

bool in_plus(const FiniteTree& t, const GString& s);

// kb_succ(eps) is eta(eps) by convention, although eps is the KB-greatest
// element of the augmented tree. Throws std::invalid_argument outside it.
GString kb_succ(const FiniteTree& t, const GString& s);

// Rank of every element of T+ in the KB order, computed lazily; entries of
// the infinite fans are handled in closed form.
class KbRank {
public:
    explicit KbRank(FiniteTree t);
    OrdinalCNF at(const GString& s) const;
    const FiniteTree& tree() const { return tree_; }

private:
    OrdinalCNF block(const GString& s) const;
    OrdinalCNF sub(const GString& s) const;
    OrdinalCNF left_part(const GString& s) const;

    FiniteTree tree_;
    mutable std::map<GString, OrdinalCNF> sub_memo_;
};

KbRank kb_rank(const FiniteTree& t);

// T plus the one-step extensions with labels up to branch_budget, in KB order.
class KBFragment {
public:
    KBFragment(FiniteTree base, Nat branch_budget);
    const FiniteTree& base() const { return base_; }
    Nat branch_budget() const { return budget_; }
    const std::vector<GString>& order() const& { return order_; }
    std::vector<GString> order() && { return std::move(order_); }
    bool contains(const GString& s) const;
    std::size_t index_of(const GString& s) const;

private:
    FiniteTree base_;
    Nat budget_;
    std::vector<GString> order_;
    std::map<GString, std::size_t> index_;
};

// Named generators used by scenario files.
FiniteTree full_binary(std::size_t d);
FiniteTree single_path(std::size_t d);
FiniteTree two_path(std::size_t d);
FiniteTree finitely_many_ones(std::size_t d);
std::optional<FiniteTree> tree_from_generator(const std::string& text);

}  // namespace treepull
