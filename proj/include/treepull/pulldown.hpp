#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "treepull/oracle_sim.hpp"
#include "treepull/strings.hpp"
#include "treepull/trees.hpp"

namespace treepull {

using GammaMap = std::map<GString, GString>;

class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& what, std::optional<GString> witness = std::nullopt)
        : std::runtime_error(what), witness(std::move(witness)) {}
    std::optional<GString> witness;
};

class InvariantBreach : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct PulldownScenario {
    std::size_t l = 0;
    StagedTree tprime;
    // T'|l when it comes from elsewhere (tower levels); must agree with tprime
    std::optional<FiniteTree> frozen;
    std::map<Nat, EnumFixture> w;
    std::map<Nat, StagedFunctional> phi;
    Stage stages = 2000;
    std::size_t depth = 8;
};

// throws ValidationError
void validate(const PulldownScenario& sc);

struct Event {
    Stage stage;
    std::string actor;
    std::string action;
    nlohmann::json payload;
};

// canonical one-line rendering, keys sorted
std::string to_jsonl(const Event& e);

enum class Outcome { Met, Avoided, Helping, Undecided };
const char* to_string(Outcome o);

struct RequirementOutcome {
    char kind;  // 'G', 'S' or 'R'
    Nat index;
    GString sigma;
    Outcome outcome;
};

struct PulldownResult {
    std::size_t l = 0;
    Stage stages = 0;
    std::size_t depth = 0;
    FiniteTree tree;        // stage-S snapshot
    FiniteTree final_tree;  // snapshot restricted to the depth budget
    std::map<GString, Stage> entry_stage;
    GammaMap final_gamma;
    FiniteTree frozen;  // T'|l
    std::vector<Event> log;
    std::vector<RequirementOutcome> report;
    std::map<GString, Stage> last_attention;
};

// Stagewise construction. One instance is one run; it is not copyable because
// the gate points into the scenario it owns.
class Pulldown {
public:
    explicit Pulldown(PulldownScenario sc);
    Pulldown(const Pulldown&) = delete;
    Pulldown& operator=(const Pulldown&) = delete;

    void run();
    void stage(Stage s);
    PulldownResult result() const;

    // first-half case logic for one attended string; true if Gamma changed
    bool attend(const GString& sigma, Stage s);

    // help predicate: some u* extending Gamma(upsilon) in T_s has an output
    // under phi incompatible with tau
    bool psi(const GString& tau, const GString& upsilon, Stage s, const StagedFunctional& phi) const;

    // direct state edits for hand-built states
    void define(const GString& sigma, const GString& value, Stage s, const std::string& actor,
                const std::string& action);
    void enumerate(const GString& tau, Stage s);

    const GammaMap& gamma() const { return gamma_; }
    const std::map<GString, Stage>& tree() const { return tree_; }
    bool in_tree(const GString& t) const { return tree_.count(t) != 0; }
    const std::vector<Event>& log() const { return log_; }
    AttentionGate& gate() { return gate_; }
    const PulldownScenario& scenario() const { return sc_; }

private:
    std::optional<GString> gamma_of(const GString& s) const;
    void undefine_above(const GString& sigma, Stage s, const std::set<GString>& keep);
    GString fresh_value(const GString& base, const GString& owner, Stage s);
    GString extend(const GString& nu, const GString& owner, Stage s);
    std::vector<GString> tree_extensions(const GString& t) const;
    bool case_r(const GString& sigma, Stage s);
    bool case_g(const GString& sigma, Stage s);
    bool case_s(const GString& sigma, Stage s);
    void second_half(const GString& tau, Stage s);
    void log(Stage s, std::string actor, std::string action, nlohmann::json payload);

    PulldownScenario sc_;
    AttentionGate gate_;
    FiniteTree frozen_;
    GammaMap gamma_;
    std::map<GString, GString> inverse_;
    std::map<GString, Stage> tree_;
    std::map<GString, Nat> next_k_;
    std::map<GString, Stage> last_attention_;
    std::map<GString, std::string> r_last_;
    std::set<GString> marked_;
    std::vector<Event> log_;
};

PulldownResult run_pulldown(const PulldownScenario& sc);

// free-standing form of the help predicate
bool psi(const Pulldown& state, const GString& tau, const GString& upsilon, Stage s, const StagedFunctional& phi);

// ------------------------------------------------------------------ checks

struct CheckReport {
    CheckReport() = default;
    explicit CheckReport(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t undecided = 0;
    std::vector<std::string> messages;  // one per fail or undecided item

    bool ok() const { return fail == 0; }
    void add_fail(std::string m) {
        ++fail;
        messages.push_back("fail: " + std::move(m));
    }
    void add_undecided(std::string m) {
        ++undecided;
        messages.push_back("undecided: " + std::move(m));
    }
};

CheckReport check_expansionary(const GammaMap& gamma, const FiniteTree& domain);
CheckReport check_identity_prefix(const GammaMap& gamma, const FiniteTree& prefix);
CheckReport check_range(const GammaMap& gamma, const FiniteTree& tree);
CheckReport check_permanence(const std::map<GString, Stage>& entry_stage);
CheckReport check_nice(const FiniteTree& t, std::size_t depth);

enum class StubVerdict { Meets, StronglyAvoids, Undecided };
const char* to_string(StubVerdict v);

struct GenericityReport {
    std::vector<std::pair<GString, StubVerdict>> stubs;
    CheckReport summary;
};

GenericityReport check_genericity(const FiniteTree& t, const std::set<GString>& w, std::size_t depth);

struct SplittingInput {
    const FiniteTree* tree;
    const GammaMap* gamma;
    const StagedFunctional* phi;
    Nat index;  // requirement index i: strings of length 4i+2
    std::size_t l;
    Stage horizon;
    const std::map<GString, Stage>* entry_stage = nullptr;
    const std::map<GString, Stage>* last_attention = nullptr;
};

CheckReport check_splitting(const SplittingInput& in);

// all result checks that apply without fixture knowledge
std::vector<CheckReport> check_result(const PulldownResult& r);

}  // namespace treepull
