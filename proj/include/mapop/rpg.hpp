#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mapop/task.hpp"

namespace mapop {

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FluentAdvert {
    Fluent fluent;
    int level = 0;
    std::vector<AgentId> achievers;  // sorted
};

// Relaxed planning graph: alternating fluent/action levels with achiever
// labels. Positive fluents and explicitly produced negative fluents are
// stored as entries; implied negatives (from assigns) are answered at query
// time, so the entry table matches the paper's table layout.
struct Rpg {
    std::map<Fluent, int> level;
    std::map<Fluent, std::set<AgentId>> achievers;
    std::map<ActionId, int> action_level;
    std::map<VarId, std::map<ObjectId, int>> positive_by_var;

    // Best known level; negative fluents fall back to any other positive
    // value of the variable (a positive fluent implies the other negatives).
    std::optional<int> cost(const Fluent &f) const;
    std::set<AgentId> achiever_set(const Fluent &f) const;  // throws on absent fluents
    size_t fluent_count() const;  // positive entries only (table layout)
    int max_fluent_level() const;
    int max_action_level() const;

    // Inserts or lowers an entry; unions achievers. Returns true when
    // anything changed.
    bool integrate(const Fluent &f, int lvl, const std::set<AgentId> &who);
};

// Per-agent exchange state: the graph plus what was already advertised to
// each peer (improvements are re-advertised).
struct RpgAgentState {
    Rpg rpg;
    std::map<AgentId, std::map<Fluent, std::pair<int, std::set<AgentId>>>> sent;
};

struct ExchangeResult {
    bool changed = false;
    std::map<AgentId, std::vector<FluentAdvert>> outbox;  // only non-empty batches
};

Rpg build_initial_rpg(const AgentModel &agent, const MapTask &task);

// One synchronized round for one agent: integrate the inbox (visibility
// checked; violations raise ProtocolError), re-expand, collect per-peer
// adverts not previously sent.
ExchangeResult exchange_round(const AgentModel &agent, RpgAgentState &state,
                              const std::vector<FluentAdvert> &inbox, const MapTask &task);

// Synchronized rounds until no agent receives any new advert. `on_message`
// observes every delivered batch in deterministic order.
std::vector<Rpg> run_fixpoint(
    const MapTask &task,
    const std::function<void(AgentId from, AgentId to, const std::vector<FluentAdvert> &)>
        &on_message = {});

int heuristic_cost_or_penalty(const Rpg &rpg, const Fluent &f, int penalty);

// Table-style dump: per level, one line per positive fluent
// "[achiever,...] (term) value"; achievers print as 1-based ordinals.
std::string dump_rpg(const Rpg &rpg, const MapTask &task);

}  // namespace mapop
