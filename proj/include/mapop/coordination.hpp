#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapop/plan.hpp"
#include "mapop/rpg.hpp"
#include "mapop/task.hpp"

namespace mapop {

class Bus;           // runtime.hpp
struct SearchBudget;  // pop.hpp

// The utility function F maps an agent's view of a plan to a non-negative
// cost (lower is better). Weighted visible step count plus the dis-RPG cost
// of the visible open goals, minus a bonus per supported private goal.
struct EvaluatorConfig {
    double weight_actions = 1.0;
    double weight_open_goal_cost = 1.0;
    double private_goal_bonus = 1.0;
    // Visible open goals absent from the observer's graph cost this much.
    // Integer-valued so that scaling all weights is exact in doubles.
    int unreachable_penalty = 1000000;
};

double evaluate(const AgentModel &observer, const PlanView &view, const Rpg &rpg,
                const EvaluatorConfig &cfg);

// The baton agent picks the open goal with the highest cost in its own graph
// (unreachable counts as highest); ties break on lowest (fluent, step).
std::optional<OpenGoal> select_open_goal(const PartialPlan &plan, const Rpg &baton_rpg);

struct PoolEntry {
    int id = -1;
    PartialPlan plan;
    std::vector<double> scores;  // per agent, computed once at insertion
};

struct SearchPool {
    std::map<int, PoolEntry> entries;
    int next_id = 0;

    int add(PartialPlan plan, std::vector<double> scores);
    bool empty() const { return entries.empty(); }
};

struct Ballot {
    AgentId voter = kNoAgent;
    int choice = -1;
    double score = 0.0;
};

Ballot cast_ballot(AgentId voter, const SearchPool &pool);

// Plurality winner; draws go to the baton agent's best-scored tied plan (then
// lowest id). The winner is removed from the pool. Returns nothing on an
// empty pool (no-solution signal).
std::optional<PoolEntry> vote_and_adopt(SearchPool &pool, const std::vector<Ballot> &ballots,
                                        AgentId baton);

// Every agent must report zero visible open goals over its own view and the
// full plan must pass is_solution at the coordinator.
bool confirm_solution(const PartialPlan &plan, const MapTask &task);

struct ResolutionOptions {
    AgentId initial_baton = 0;
    int max_rounds = 500;
    std::vector<AgentId> agent_order;  // scheduler order; empty = 0..n-1
    std::ostream *trace = nullptr;
};

struct SolutionReport {
    enum class Status { Solved, NoSolution } status = Status::NoSolution;
    PartialPlan plan;  // solution, or the last base plan inspected
    int rounds = 0;
    long expanded_nodes = 0;
    std::string termination;  // "solved" | "pool-exhausted" | "round-budget"
};

// Alg. 3: repeat { baton selects a goal; capable agents refine; proposals are
// broadcast, evaluated from each agent's view and pooled; ballots pick the
// next base; baton rotates } until a confirmed solution or R = empty.
SolutionReport resolution_loop(const MapTask &task, const std::vector<Rpg> &rpgs, Bus &bus,
                               const EvaluatorConfig &cfg, const SearchBudget &budget,
                               const ResolutionOptions &opts = {});

}  // namespace mapop
