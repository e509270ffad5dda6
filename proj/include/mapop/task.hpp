#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapop/ast.hpp"
#include "mapop/diagnostics.hpp"

namespace mapop {

using ObjectId = int32_t;
using VarId = int32_t;
using ActionId = int32_t;
using AgentId = int32_t;
using StepId = int32_t;

constexpr AgentId kNoAgent = -1;

// A fluent is a variable/value pair; positive means "v takes d", negative
// means "v does not take d" (open-world: absence is unknown, not false).
struct Fluent {
    VarId var = -1;
    ObjectId value = -1;
    bool positive = true;

    friend auto operator<=>(const Fluent &, const Fluent &) = default;
};

struct EffectOp {
    VarId var = -1;
    ObjectId value = -1;
    bool assign = true;  // false: deny (v != d)

    friend auto operator<=>(const EffectOp &, const EffectOp &) = default;
};

struct ObjectTable {
    std::vector<std::string> names;
    std::map<std::string, ObjectId> by_name;

    ObjectId intern(const std::string &name);
    ObjectId find(const std::string &name) const;
    const std::string &name(ObjectId id) const { return names.at(static_cast<size_t>(id)); }
    // ids 0/1 are the boolean objects.
    static constexpr ObjectId kTrue = 0;
    static constexpr ObjectId kFalse = 1;
};

// Variables whose head never appears in any agent's :shared-data are
// agent-scoped: two agents' `(area cB)` are distinct variables. Shared heads
// intern globally so exchanged fluents refer to the same variable everywhere.
struct VariableInfo {
    std::string head;
    std::vector<ObjectId> args;
    AgentId scope = kNoAgent;  // kNoAgent: global
    bool boolean = false;
    std::string display;  // "(at t1)"
};

struct VariableTable {
    std::vector<VariableInfo> vars;
    std::map<std::tuple<std::string, std::vector<ObjectId>, AgentId>, VarId> index;

    VarId intern(VariableInfo info);
    VarId find(const std::string &head, const std::vector<ObjectId> &args, AgentId scope) const;
    const VariableInfo &info(VarId v) const { return vars.at(static_cast<size_t>(v)); }
    size_t size() const { return vars.size(); }
};

struct GroundAction {
    ActionId id = -1;
    std::string name;                  // "drive t1 ca cb"
    std::vector<Fluent> pre;           // sorted, unique
    std::vector<EffectOp> eff;         // sorted; at most one assign per variable
    std::vector<AgentId> owners;       // sorted; empty for the fictitious actions

    bool fictitious() const { return owners.empty(); }
};

struct CompiledPattern {
    std::string head;
    std::vector<std::vector<std::string>> param_types;  // allowed type union per argument
    std::vector<std::string> value_types;               // empty: predicate pattern
    bool all_agents = true;
    std::vector<std::string> recipient_names;
    std::vector<AgentId> recipients;  // resolved against the spawned agent set
};

struct AgentModel {
    AgentId id = kNoAgent;
    std::string name;
    std::map<std::string, std::string> type_parent;
    std::map<ObjectId, std::string> object_type;
    std::vector<ObjectId> declared_objects;

    std::set<VarId> variables;                       // V^i
    std::map<VarId, std::vector<ObjectId>> domains;  // D^i_v, sorted
    std::vector<ActionId> actions;                   // A^i
    std::vector<Fluent> init;                        // I^i, sorted
    std::vector<CompiledPattern> share_patterns;
    std::vector<Fluent> private_goals;

    bool is_subtype(const std::string &t, const std::string &u) const;
    bool object_is(ObjectId o, const std::vector<std::string> &allowed) const;
    bool sees_var(VarId v) const { return variables.count(v) > 0; }
    bool sees_value(VarId v, ObjectId d) const;
    bool sees(const Fluent &f) const { return sees_var(f.var) && sees_value(f.var, f.value); }
};

constexpr ActionId kInitAction = 0;
constexpr ActionId kGoalAction = 1;

struct MapTask {
    ObjectTable objects;
    VariableTable vars;
    std::vector<GroundAction> actions;  // [0] = Init, [1] = Goal, then per-agent actions
    std::vector<AgentModel> agents;
    std::vector<Fluent> goals;  // G, sorted; PRE of the fictitious final action
    std::map<std::string, ActionId> action_index;  // "agent/name" -> id

    const GroundAction &action(ActionId a) const { return actions.at(static_cast<size_t>(a)); }
    const AgentModel &agent(AgentId i) const { return agents.at(static_cast<size_t>(i)); }
    AgentId agent_by_name(const std::string &name) const;

    bool visible(AgentId i, const Fluent &f) const { return agent(i).sees(f); }
    // Number of agents that manage the variable; >=2 makes it a public variable.
    int visible_agent_count(VarId v) const;
    // No other agent can see the fluent (variable and value).
    bool strictly_private(AgentId i, const Fluent &f) const;

    std::string fluent_name(const Fluent &f) const;
    std::string qualified_action_name(ActionId a) const;
};

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grounds all validated agent inputs into one task. Reports problems through
// `diags`; returns nothing when any error was recorded.
std::optional<MapTask> ground_task(const std::vector<ValidatedAgentInput> &inputs,
                                   std::vector<Diagnostic> &diags);

// State-set operations (pure; states are sorted fluent vectors).
std::vector<Fluent> negative_closure(const std::vector<Fluent> &state, const AgentModel &agent);
std::vector<Fluent> apply_effects(const std::vector<Fluent> &state, const GroundAction &action,
                                  const AgentModel &agent);
bool holds_in(const std::vector<Fluent> &closed_state, const Fluent &f);

bool is_shareable(const Fluent &f, const AgentModel &from, AgentId to, const MapTask &task);

// Debug dump of the grounded model, one record per line, for fixture diffing.
std::string dump_model(const MapTask &task);

}  // namespace mapop
