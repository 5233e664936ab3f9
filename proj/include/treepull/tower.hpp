#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treepull/oracle_sim.hpp"
#include "treepull/pulldown.hpp"
#include "treepull/strings.hpp"
#include "treepull/trees.hpp"

namespace treepull {

// ------------------------------------------------------------ copy lengths

// l(eps) = 0, l(t^n) = l(t) + 4(n+1); throws std::invalid_argument outside U+
std::size_t copy_len(const FiniteTree& u, const GString& sigma);
// l^sigma_tau for tau <KB sigma, by the three-clause recursion
std::size_t copy_len_pair(const FiniteTree& u, const GString& sigma, const GString& tau);

struct CopyLenTable {
    FiniteTree u;
    Nat branch = 0;
    std::vector<GString> order;  // fragment in KB order
    std::map<GString, std::size_t> l;
    std::map<std::pair<GString, GString>, std::size_t> l_pair;  // key (sigma, tau), tau <KB sigma
};

CopyLenTable copy_len_table(const FiniteTree& u, Nat branch);

CheckReport check_acceptable(const CopyLenTable& table);

// ------------------------------------------------------------ uniformize

struct Evaluation {
    bool accept = true;
    Nat steps = 0;
    Nat use_column = 0;
};

// verdict of the local test at sigma (not its prefixes)
using Evaluator = std::function<Evaluation(const GString&)>;

struct UniformSchedule {
    std::vector<std::size_t> l;  // l_0 < l_1 < ...
    std::vector<Nat> u;          // step bounds; empty means u_n = l_n
};

struct FrozenPrefix {
    std::size_t depth;  // l_{-1}
    FiniteTree prefix;
};

class Uniformized {
public:
    // throws std::invalid_argument if the schedule is not strictly monotone
    Uniformized(Evaluator ev, UniformSchedule sched, std::optional<FrozenPrefix> frozen = std::nullopt);

    // T*, deciding sigma at the least n with l_n >= |sigma|
    bool contains(const GString& sigma) const;
    // the level-n view T*|l_n
    bool contains_at(const GString& sigma, std::size_t n) const;
    std::size_t level_of(const GString& sigma) const;
    std::size_t levels() const { return sched_.l.size(); }
    std::size_t l(std::size_t n) const { return sched_.l.at(n); }
    LazyTree lazy(Nat branch) const;
    FiniteTree level_tree(std::size_t n, Nat branch) const;

private:
    bool visible(const Evaluation& e, std::size_t n) const;

    Evaluator ev_;
    UniformSchedule sched_;
    std::optional<FrozenPrefix> frozen_;
};

// evaluator for an explicit finite tree: rejections outside it carry use column 0
Evaluator tree_evaluator(const FiniteTree& t);

// ------------------------------------------------------------ towers

struct TowerOptions {
    Stage stages = 2000;
    std::optional<std::size_t> depth;  // default: largest copy length + 8
};

struct TowerLevel {
    GString node;
    std::size_t copy_len = 0;
    FiniteTree tree;
    std::optional<GString> up;  // level whose tree this one was pulled down from
    GammaMap gamma_up;          // T_node -> T_up
    std::vector<Event> log;
};

struct TowerBundle {
    FiniteTree u;
    Nat branch = 0;
    std::size_t depth = 0;
    std::vector<GString> order;  // fragment in KB order; the top is last
    std::map<GString, TowerLevel> levels;

    const TowerLevel& level(const GString& node) const;
    bool is_u_node(const GString& node) const { return u.contains(node); }
    std::optional<GString> kb_pred(const GString& node) const;
};

class TowerError : public std::runtime_error {
public:
    TowerError(const GString& node, const std::string& what)
        : std::runtime_error("level " + to_string(node) + ": " + what), node(node) {}
    GString node;
};

// levels are built top-down in KB order; throws TowerError wrapping level failures
TowerBundle build_tower(const FiniteTree& u, Nat branch, const FiniteTree& top, const TowerOptions& opt = {});
// U = {eps}, fan 0..k-1
TowerBundle build_tower_height(std::size_t k, const FiniteTree& top, const TowerOptions& opt = {});

// Gamma from T_theta into T_vartheta, theta <=KB vartheta; nullopt where undefined
std::optional<GString> tower_gamma(const TowerBundle& b, const GString& vartheta, const GString& theta,
                                   const GString& sigma);

CheckReport check_composition(const TowerBundle& b);
CheckReport check_copy_agreement(const TowerBundle& b);
CheckReport check_identity_below_copy(const TowerBundle& b);
CheckReport check_tower_expansionary(const TowerBundle& b);
CheckReport check_splitting_propagation(const TowerBundle& b, const StagedFunctional& phi, const GString& stub);

}  // namespace treepull
