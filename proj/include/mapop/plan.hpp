#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mapop/task.hpp"

namespace mapop {

struct PlanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A plan step carries its own copies of the action content so that
// privacy-filtered views are plans too (with elided preconditions/effects).
struct PlanStep {
    StepId id = -1;
    ActionId action = -1;
    std::string name;
    std::vector<AgentId> owners;
    AgentId author = kNoAgent;  // proposing agent
    std::vector<Fluent> pre;
    std::vector<EffectOp> eff;
    bool fictitious = false;
};

// A causal link remembers which agent introduced it; transmission filters use
// the author's share patterns.
struct CausalLink {
    StepId producer = -1;
    StepId consumer = -1;
    Fluent fluent;
    AgentId author = kNoAgent;

    friend auto operator<=>(const CausalLink &, const CausalLink &) = default;
};

struct Threat {
    StepId threatening_step = -1;
    CausalLink link;

    friend auto operator<=>(const Threat &, const Threat &) = default;
};

using OpenGoal = std::pair<StepId, Fluent>;

constexpr StepId kInitStep = 0;
constexpr StepId kGoalStep = 1;

class PartialPlan {
public:
    PartialPlan() = default;

    const std::vector<PlanStep> &steps() const { return steps_; }
    const PlanStep &step(StepId s) const { return steps_.at(static_cast<size_t>(s)); }
    const std::set<std::pair<StepId, StepId>> &orderings() const { return orderings_; }
    const std::vector<CausalLink> &links() const { return links_; }
    size_t size() const { return steps_.size(); }

    StepId add_step(PlanStep step);  // assigns the next id
    // Adds an explicit ordering constraint; throws PlanError on a cycle.
    void add_ordering(StepId before, StepId after);
    // Adds a causal link after checking Def. 4's support rule; implies an
    // ordering edge. Throws PlanError on cycle/dangling/unsupported links.
    void add_link(CausalLink link);

    bool would_cycle(StepId before, StepId after) const;
    // True when `a` strictly precedes `b` in the transitive closure
    // (fictitious bounds included).
    bool ordered_before(StepId a, StepId b) const;
    bool unordered(StepId a, StepId b) const { return !ordered_before(a, b) && !ordered_before(b, a); }

    bool supported(StepId consumer, const Fluent &f) const;  // has an incoming link for f
    bool fully_supported(StepId s) const;

private:
    friend PartialPlan empty_plan(const MapTask &task);

    std::vector<PlanStep> steps_;
    std::set<std::pair<StepId, StepId>> orderings_;
    std::vector<CausalLink> links_;
    // reach_[a] bit b set when a strictly precedes b.
    std::vector<std::vector<uint64_t>> reach_;

    void grow_reach();
    void set_reach(StepId a, StepId b);
    bool reach(StepId a, StepId b) const;
    void propagate(StepId u, StepId v);
};

// Does the producer's effect set support fluent f per Def. 4?
bool effects_support(const std::vector<EffectOp> &eff, const Fluent &f);

PartialPlan empty_plan(const MapTask &task);

std::vector<OpenGoal> open_goals(const PartialPlan &plan);
std::vector<Threat> threats(const PartialPlan &plan);

enum class ThreatResolution { Promotion, Demotion };
// Promotion orders the threat before the link's producer, demotion after its
// consumer. Throws PlanError when the mode cycles or the threat is not live.
PartialPlan resolve_threat(const PartialPlan &plan, const Threat &threat, ThreatResolution mode);

// Shared visibility scope for a pair of actions (intersection of the owner
// agents' variable/value views).
struct PairVisibility {
    const MapTask *task = nullptr;
    std::vector<AgentId> left, right;

    bool var_shared(VarId v) const;
    bool value_shared(VarId v, ObjectId d) const;
};

// Which of Def. 7's three clauses fire for the pair (bit 0 = first clause).
unsigned consistency_clauses(const std::vector<Fluent> &pre_a, const std::vector<EffectOp> &eff_a,
                             const std::vector<Fluent> &pre_b, const std::vector<EffectOp> &eff_b,
                             const PairVisibility &vis);
bool mutually_consistent(const GroundAction &a, const GroundAction &b, const MapTask &task);
bool mutually_consistent_steps(const PlanStep &a, const PlanStep &b, const MapTask &task);

bool is_public_step(const PlanStep &s, const MapTask &task);
bool is_concurrent_plan(const PartialPlan &plan, const MapTask &task);
bool is_solution(const PartialPlan &plan, const MapTask &task);

// A refinement step: a threat-free addition that solves one open goal of the
// base plan plus the author's strictly-private fallout. Added steps use
// provisional ids base.size(), base.size()+1, ...
struct RefinementStep {
    AgentId author = kNoAgent;
    OpenGoal solved_goal{-1, {}};
    std::vector<PlanStep> added_steps;
    std::vector<std::pair<StepId, StepId>> added_orderings;
    std::vector<CausalLink> added_links;

    bool empty() const {
        return added_steps.empty() && added_orderings.empty() && added_links.empty();
    }
};

PartialPlan compose(const PartialPlan &base, const RefinementStep &step);

// Privacy-filtered view: occluded causal links appear as bare orderings and
// step preconditions/effects over non-visible fluents are elided. When
// `wire_filter` is set, link/step content added by other agents must also be
// shareable by its author to the observer (what the bus would have delivered).
struct PlanView {
    AgentId observer = kNoAgent;
    PartialPlan plan;
    int occluded_links = 0;
};

PlanView view(const PartialPlan &plan, const AgentModel &observer, const MapTask &task,
              bool wire_filter = false);

std::pair<int, int> makespan_and_parallelism(const PartialPlan &plan, const MapTask &task);

// Structured text serialization (stable field order) and DOT export.
std::string serialize_plan(const PartialPlan &plan, const MapTask &task);
PartialPlan parse_plan(const std::string &text, const MapTask &task);
std::string plan_to_dot(const PartialPlan &plan, const MapTask &task);

}  // namespace mapop
