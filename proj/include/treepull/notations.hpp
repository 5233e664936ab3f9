#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treepull/ordinal.hpp"
#include "treepull/trees.hpp"

namespace treepull {

class NotationTerm;
using Notation = std::shared_ptr<const NotationTerm>;
using SeqFn = std::function<Notation(Nat)>;

enum class NotationKind { Zero, Succ, Lim };

// Apparent ordinal notation. Lim terms carry a named, pure sequence handle;
// values are memoized so repeated expansion returns the same object.
class NotationTerm {
public:
    static Notation zero();
    static Notation succ(Notation inner);
    static Notation lim(std::string tag, Nat serial, SeqFn seq);

    NotationKind kind() const { return kind_; }
    const Notation& inner() const { return inner_; }
    const std::string& tag() const { return tag_; }
    Nat serial() const { return serial_; }
    // Olim(this)(n); only for Lim terms
    Notation at(Nat n) const;
    // structural identity key; equal keys mean the same notation
    const std::string& key() const { return key_; }

private:
    NotationKind kind_ = NotationKind::Zero;
    Notation inner_;
    std::string tag_;
    Nat serial_ = 0;
    SeqFn seq_;
    std::string key_;
    mutable std::recursive_mutex mu_;
    mutable std::map<Nat, Notation> memo_;
};

bool same_notation(const Notation& a, const Notation& b);
Notation succ_n(Notation base, Nat n);
Notation nat_notation(Nat n);
// strips successor wrappers
Notation core_of(Notation t);

Notation o_add(const Notation& a, const Notation& b);

enum class OVerdict { Less, Geq, Unresolved };
const char* to_string(OVerdict v);

OVerdict o_less(const Notation& a, const Notation& b, Nat budget);

std::optional<OrdinalCNF> height(const Notation& a, Nat budget);
// limit of an increasing CNF sequence when its tail follows a recognizable pattern
std::optional<OrdinalCNF> cnf_limit(const std::vector<OrdinalCNF>& seq);

// Fixture catalog: "w", "w*k", "w^k", "w^w".
namespace catalog {
Notation omega();
Notation omega_times(Nat k);
Notation omega_pow(Nat k);
Notation omega_omega();
std::optional<Notation> lookup(const std::string& name);
}  // namespace catalog

// "0", "succ(t)", "lim:<catalog-name>"
std::optional<Notation> parse_notation(const std::string& text);
std::string render_notation(const Notation& t);

// Direct KB recursion over a finite tree: eta(eps) gets Zero, other leaves of
// T+ the successor of their KB predecessor, members of T a Lim term whose
// sequence is n -> rho(s^n). Serials follow the code order on T, so rho is
// strictly increasing on T when notations are compared by serial.
class Rho {
public:
    explicit Rho(FiniteTree t);
    Notation at(const GString& s) const;
    const FiniteTree& tree() const { return *tree_; }
    // the string whose KB successor is s, for s in T+ \ T other than eta(eps)
    static std::optional<GString> kb_pred_leaf(const FiniteTree& t, const GString& s);

    struct Shared;

private:
    std::shared_ptr<const FiniteTree> tree_;
    std::shared_ptr<Shared> shared_;
};

Rho rho(const FiniteTree& t);

struct NotationTree {
    FiniteTree tree;                      // U
    std::map<GString, Notation> labels;   // construction labels on U
    std::map<GString, Nat> entered_at;    // stage each node entered
};

// throws std::invalid_argument unless a is a Lim term
NotationTree notation_to_tree(const Notation& a, Nat stages, Nat budget = 16);

}  // namespace treepull
