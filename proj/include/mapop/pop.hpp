#pragma once

#include <vector>

#include "mapop/coordination.hpp"
#include "mapop/plan.hpp"
#include "mapop/rpg.hpp"
#include "mapop/task.hpp"

namespace mapop {

struct SearchBudget {
    int max_nodes = 10000;
    int max_refinements = 10;
};

// An agent may propose a refinement for a goal iff it sees the goal's
// variable and value.
bool can_refine(const AgentModel &agent, const Fluent &goal);

struct SupporterCandidate {
    bool reuse = false;   // true: existing plan step, false: new own action
    StepId step = -1;
    ActionId action = -1;
};

// Def. 4 support candidates: existing steps whose (visible) effects support
// the goal, plus the agent's own RPG-reachable producing actions.
std::vector<SupporterCandidate> supporters(const AgentModel &agent, const PartialPlan &base,
                                           const Fluent &goal, const Rpg &rpg, const MapTask &task);

struct RefinementList {
    std::vector<RefinementStep> refinements;  // ordered by the evaluation function
    bool budget_exhausted = false;
    long nodes_expanded = 0;
};

// Best-first search over refinement candidates for one selected open goal of
// the base plan (given as the author's view). Every emitted step composes
// into a threat-free multi-agent concurrent plan with the goal solved and no
// open goal left on the author's strictly-private fluents.
RefinementList refine(const AgentModel &agent, const PartialPlan &base_view, const OpenGoal &goal,
                      const Rpg &rpg, const SearchBudget &budget, const MapTask &task,
                      const EvaluatorConfig &cfg);

}  // namespace mapop
