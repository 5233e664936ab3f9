#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "treepull/pulldown.hpp"
#include "treepull/strings.hpp"
#include "treepull/tower.hpp"
#include "treepull/trees.hpp"

namespace treepull {

inline constexpr int kSchemaVersion = 1;

// malformed or invalid scenario/result files
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json load_json_file(const std::string& path);

// array of naturals, or text such as "⟨0,1⟩" / "<0,1>"
GString gstring_from_json(const nlohmann::json& j);
nlohmann::json gstring_to_json(const GString& s);

// generator name ("two-path(8)", "nice(two-path(8))"), list of strings, or
// {"strings": [...]}; lists are closed downward with a warning
FiniteTree tree_from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);
nlohmann::json tree_to_json(const FiniteTree& t);

struct RunOptions {
    std::optional<Stage> stages;
    std::optional<std::size_t> depth;
    std::optional<Nat> branch_bound;
};

struct RunOutput {
    std::string name;
    nlohmann::json result;
    std::vector<std::string> log_lines;
    std::vector<std::string> warnings;
};

PulldownScenario pulldown_scenario_from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);

// throws ScenarioError, ValidationError, FixtureError, TowerError (all exit 2)
// and InvariantBreach (exit 3)
RunOutput run_scenario(const nlohmann::json& scenario, const RunOptions& opt = {});

nlohmann::json pulldown_result_to_json(const PulldownResult& r);
PulldownResult pulldown_result_from_json(const nlohmann::json& j);
nlohmann::json tower_to_json(const TowerBundle& b);
TowerBundle tower_from_json(const nlohmann::json& j);

// checker names applicable to a result kind, in default order
std::vector<std::string> checkers_for(const std::string& kind);
// runs the named checkers (all applicable ones if names is empty);
// throws ScenarioError on an unknown or inapplicable name
std::vector<CheckReport> run_checks(const nlohmann::json& result, const std::vector<std::string>& names);

// G entries of the report claiming "met" must have a witness in W and T
CheckReport check_g_report(const PulldownResult& r, const std::map<Nat, EnumFixture>& w);

}  // namespace treepull
