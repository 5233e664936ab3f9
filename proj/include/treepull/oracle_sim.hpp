#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treepull/strings.hpp"
#include "treepull/trees.hpp"

namespace treepull {

using Stage = std::uint64_t;

class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Flip {
    Stage stage;
    GString string;
    bool in;
};

// Stagewise approximation T'_s: a finite base tree edited by flips. A flip at
// stage t is in effect at every stage >= t; later flips on the same string win.
class StagedTree {
public:
    StagedTree() = default;
    // validates; throws FixtureError naming the offending flip
    StagedTree(FiniteTree base, std::size_t frozen_depth, std::vector<Flip> flips,
               std::map<GString, Stage> stable_at = {});

    bool query(const GString& s, Stage stage) const;
    FiniteTree slice(Stage stage) const;
    // T'|l, which every slice agrees with
    FiniteTree frozen_prefix() const { return base_.restrict(frozen_depth_); }
    std::size_t frozen_depth() const { return frozen_depth_; }
    const FiniteTree& base() const { return base_; }
    const std::vector<Flip>& flips() const { return flips_; }
    const std::map<GString, Stage>& stable_at() const { return stable_at_; }
    // stages at which some slice may change
    std::vector<Stage> flip_stages() const;
    // verdict after the last flip
    bool limit(const GString& s) const;

private:
    FiniteTree base_;
    std::size_t frozen_depth_ = 0;
    std::vector<Flip> flips_;  // sorted by (stage, string)
    std::map<GString, std::vector<std::size_t>> by_string_;  // indices into flips_
    std::map<GString, Stage> stable_at_;
};

// Per-string gated view of a StagedTree: a string's verdict only moves when
// the string is attended. Before its first attention a string sees stage 0.
class AttentionGate {
public:
    explicit AttentionGate(const StagedTree* inner) : inner_(inner) {}

    // records attention to s at stage t and returns the refreshed verdict
    bool attend(const GString& s, Stage t);
    // gated verdict as of stage t
    bool query(const GString& s, Stage t) const;
    // least t such that the gated verdict is true on [t, now]; nullopt if out
    std::optional<Stage> appears_enter(const GString& s, Stage now) const;
    // flips of the inner tree not yet observed through attention, as of stage t
    std::vector<Flip> pending(Stage t) const;
    const std::map<GString, std::vector<std::pair<Stage, bool>>>& history() const { return history_; }
    const StagedTree& inner() const { return *inner_; }

private:
    const StagedTree* inner_;
    // verdict changes observed at attention stages, oldest first
    std::map<GString, std::vector<std::pair<Stage, bool>>> history_;
};

class EnumFixture {
public:
    EnumFixture() = default;
    explicit EnumFixture(std::vector<std::pair<Stage, GString>> events);

    std::set<GString> enumerated(Stage s) const;
    bool contains(const GString& x, Stage s) const;
    std::optional<Stage> entry_stage(const GString& x) const;
    const std::vector<std::pair<Stage, GString>>& events() const { return events_; }
    bool empty() const { return events_.empty(); }

private:
    std::vector<std::pair<Stage, GString>> events_;
    std::map<GString, Stage> first_;
};

struct FunctionalEntry {
    Stage stage;
    GString input;
    GString output;
};

// Monotone staged string functional.
class StagedFunctional {
public:
    StagedFunctional() = default;
    // validates stage- and input-monotonicity; throws FixtureError
    explicit StagedFunctional(std::vector<FunctionalEntry> entries);

    GString eval(const GString& input, Stage s) const;
    // eval with every entry visible
    GString eval_limit(const GString& input) const;
    // least stage at which eval(input, .) reaches its limit value
    Stage settle_stage(const GString& input) const;
    const std::vector<FunctionalEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<FunctionalEntry> entries_;  // sorted by (stage, input)
};

}  // namespace treepull
