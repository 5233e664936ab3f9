#include "treepull/oracle_sim.hpp"

#include <algorithm>
#include <tuple>

namespace treepull {

// --------------------------------------------------------------- StagedTree

StagedTree::StagedTree(FiniteTree base, std::size_t frozen_depth, std::vector<Flip> flips,
                       std::map<GString, Stage> stable_at)
    : base_(std::move(base)), frozen_depth_(frozen_depth), flips_(std::move(flips)), stable_at_(std::move(stable_at)) {
    std::stable_sort(flips_.begin(), flips_.end(), [](const Flip& a, const Flip& b) {
        return std::tie(a.stage, a.string) < std::tie(b.stage, b.string);
    });
    for (std::size_t i = 0; i < flips_.size(); ++i) {
        const Flip& f = flips_[i];
        if (f.string.size() <= frozen_depth_)
            throw FixtureError("flip at stage " + std::to_string(f.stage) + " touches frozen string " +
                               to_string(f.string));
        by_string_[f.string].push_back(i);
    }
    // each slice must be downward closed; slices only change at flip stages
    std::vector<Stage> checks{0};
    for (Stage t : flip_stages()) checks.push_back(t);
    for (Stage t : checks) {
        for (const auto& [s, fl] : by_string_) {
            if (!query(s, t) || s.empty()) continue;
            if (!query(predecessor(s), t))
                throw FixtureError("slice at stage " + std::to_string(t) + " is not downward closed at " +
                                   to_string(s));
        }
        for (const auto& m : base_.members()) {
            if (m.empty() || !query(m, t) || by_string_.count(m)) continue;
            if (!query(predecessor(m), t))
                throw FixtureError("slice at stage " + std::to_string(t) + " is not downward closed at " +
                                   to_string(m));
        }
    }
}

bool StagedTree::query(const GString& s, Stage stage) const {
    bool v = base_.contains(s);
    auto it = by_string_.find(s);
    if (it == by_string_.end()) return v;
    for (std::size_t i : it->second) {
        if (flips_[i].stage > stage) break;
        v = flips_[i].in;
    }
    return v;
}

bool StagedTree::limit(const GString& s) const {
    auto it = by_string_.find(s);
    if (it == by_string_.end()) return base_.contains(s);
    return flips_[it->second.back()].in;
}

FiniteTree StagedTree::slice(Stage stage) const {
    std::vector<GString> keep;
    for (const auto& m : base_.members())
        if (query(m, stage)) keep.push_back(m);
    for (const auto& [s, fl] : by_string_)
        if (query(s, stage)) keep.push_back(s);
    return FiniteTree::closure_of(keep);
}

std::vector<Stage> StagedTree::flip_stages() const {
    std::vector<Stage> out;
    for (const auto& f : flips_)
        if (out.empty() || out.back() != f.stage) out.push_back(f.stage);
    return out;
}

// ------------------------------------------------------------ AttentionGate

bool AttentionGate::attend(const GString& s, Stage t) {
    bool v = inner_->query(s, t);
    auto& h = history_[s];
    if (h.empty()) {
        bool v0 = inner_->query(s, 0);
        h.emplace_back(0, v0);
    }
    if (h.back().second != v && t >= h.back().first) h.emplace_back(t, v);
    return h.back().second;
}

bool AttentionGate::query(const GString& s, Stage t) const {
    auto it = history_.find(s);
    if (it == history_.end()) return inner_->query(s, 0);
    bool v = it->second.front().second;
    for (const auto& [st, val] : it->second) {
        if (st > t) break;
        v = val;
    }
    return v;
}

std::optional<Stage> AttentionGate::appears_enter(const GString& s, Stage now) const {
    if (!query(s, now)) return std::nullopt;
    auto it = history_.find(s);
    if (it == history_.end()) return Stage{0};
    // history records changes only, so the last entry up to now is where
    // the current run of true verdicts began
    Stage t = 0;
    for (const auto& [st, val] : it->second) {
        if (st > now) break;
        t = st;
    }
    return t;
}

std::vector<Flip> AttentionGate::pending(Stage t) const {
    std::vector<Flip> out;
    for (const auto& f : inner_->flips()) {
        if (f.stage > t) continue;
        if (query(f.string, t) != inner_->query(f.string, t)) out.push_back(f);
    }
    return out;
}

// -------------------------------------------------------------- EnumFixture

EnumFixture::EnumFixture(std::vector<std::pair<Stage, GString>> events) : events_(std::move(events)) {
    std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
    for (const auto& [st, x] : events_) first_.emplace(x, st);
}

std::set<GString> EnumFixture::enumerated(Stage s) const {
    std::set<GString> out;
    for (const auto& [st, x] : events_) {
        if (st > s) break;
        out.insert(x);
    }
    return out;
}

bool EnumFixture::contains(const GString& x, Stage s) const {
    auto it = first_.find(x);
    return it != first_.end() && it->second <= s;
}

std::optional<Stage> EnumFixture::entry_stage(const GString& x) const {
    auto it = first_.find(x);
    if (it == first_.end()) return std::nullopt;
    return it->second;
}

// --------------------------------------------------------- StagedFunctional

StagedFunctional::StagedFunctional(std::vector<FunctionalEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const FunctionalEntry& a, const FunctionalEntry& b) {
        return std::tie(a.stage, a.input, a.output) < std::tie(b.stage, b.input, b.output);
    });
    auto name = [](const FunctionalEntry& e) {
        return "(" + std::to_string(e.stage) + ", " + to_string(e.input) + ", " + to_string(e.output) + ")";
    };
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            if (i == j) continue;
            const auto& a = entries_[i];
            const auto& b = entries_[j];
            if (a.input == b.input) {
                // later stages may only extend
                if (a.stage <= b.stage && !extends(b.output, a.output))
                    throw FixtureError("functional entry " + name(b) + " does not extend " + name(a));
            } else if (proper_extends(b.input, a.input)) {
                if (!extends(b.output, a.output))
                    throw FixtureError("functional entry " + name(b) + " is not monotone over " + name(a));
            }
        }
    }
}

GString StagedFunctional::eval(const GString& input, Stage s) const {
    GString best;
    for (const auto& e : entries_) {
        if (e.stage > s) break;
        if (extends(input, e.input) && e.output.size() > best.size()) best = e.output;
    }
    return best;
}

GString StagedFunctional::eval_limit(const GString& input) const {
    GString best;
    for (const auto& e : entries_)
        if (extends(input, e.input) && e.output.size() > best.size()) best = e.output;
    return best;
}

Stage StagedFunctional::settle_stage(const GString& input) const {
    GString fin = eval_limit(input);
    Stage st = 0;
    for (const auto& e : entries_)
        if (extends(input, e.input) && e.output == fin) return e.stage;
    return st;
}

}  // namespace treepull
