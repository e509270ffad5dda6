#include "mapop/pop.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace mapop {

bool can_refine(const AgentModel &agent, const Fluent &goal) { return agent.sees(goal); }

std::vector<SupporterCandidate> supporters(const AgentModel &agent, const PartialPlan &base,
                                           const Fluent &goal, const Rpg &rpg,
                                           const MapTask &task) {
    std::vector<SupporterCandidate> out;
    for (const PlanStep &s : base.steps())
        if (effects_support(s.eff, goal)) out.push_back({true, s.id, s.action});
    for (ActionId a : agent.actions) {
        const GroundAction &ga = task.action(a);
        if (!effects_support(ga.eff, goal)) continue;
        if (!rpg.action_level.count(a)) continue;  // unreachable in the agent's graph
        out.push_back({false, -1, a});
    }
    return out;
}

namespace {

struct Node {
    PartialPlan plan;
    RefinementStep step;
    std::vector<OpenGoal> private_open;
    double score = 0.0;
    long seq = 0;
};

struct NodeOrder {
    bool operator()(const Node &a, const Node &b) const {
        if (a.score != b.score) return a.score > b.score;  // min-heap on score
        return a.seq > b.seq;
    }
};

std::string signature(const RefinementStep &step) {
    std::ostringstream os;
    for (const PlanStep &s : step.added_steps) os << 'a' << s.action << ';';
    std::vector<std::pair<StepId, StepId>> ords = step.added_orderings;
    std::sort(ords.begin(), ords.end());
    for (const auto &[x, y] : ords) os << 'o' << x << '<' << y << ';';
    std::vector<CausalLink> links = step.added_links;
    std::sort(links.begin(), links.end());
    for (const CausalLink &l : links)
        os << 'l' << l.producer << '>' << l.consumer << ':' << l.fluent.var << ':'
           << l.fluent.value << ':' << l.fluent.positive << ';';
    return os.str();
}

// First unordered, fully supported, mutually inconsistent pair of public
// steps (Def. 8), if any.
std::optional<std::pair<StepId, StepId>> concurrency_clash(const PartialPlan &plan,
                                                           const MapTask &task) {
    const auto &steps = plan.steps();
    for (size_t i = 0; i < steps.size(); ++i) {
        if (!is_public_step(steps[i], task) || !plan.fully_supported(steps[i].id)) continue;
        for (size_t j = i + 1; j < steps.size(); ++j) {
            if (!is_public_step(steps[j], task) || !plan.fully_supported(steps[j].id)) continue;
            if (!plan.unordered(steps[i].id, steps[j].id)) continue;
            if (!mutually_consistent_steps(steps[i], steps[j], task))
                return std::make_pair(steps[i].id, steps[j].id);
        }
    }
    return std::nullopt;
}

class RefineSearch {
public:
    RefineSearch(const AgentModel &agent, const PartialPlan &base, const OpenGoal &goal,
                 const Rpg &rpg, const SearchBudget &budget, const MapTask &task,
                 const EvaluatorConfig &cfg)
        : agent_(agent), base_(base), goal_(goal), rpg_(rpg), budget_(budget), task_(task),
          cfg_(cfg) {}

    RefinementList run() {
        RefinementList out;
        bool open = false;
        for (const OpenGoal &og : open_goals(base_))
            if (og == goal_) open = true;
        if (!open) throw PlanError("selected goal is not open in the base plan");

        seed_candidates();
        while (!queue_.empty()) {
            if (static_cast<int>(out.refinements.size()) >= budget_.max_refinements) break;
            if (out.nodes_expanded >= budget_.max_nodes) {
                out.budget_exhausted = true;
                break;
            }
            Node node = queue_.top();
            queue_.pop();
            ++out.nodes_expanded;

            if (!node.private_open.empty()) {
                expand_goal(node);
                continue;
            }
            std::vector<Threat> ts = threats(node.plan);
            if (!ts.empty()) {
                expand_threat(node, ts.front());
                continue;
            }
            auto clash = concurrency_clash(node.plan, task_);
            if (clash) {
                expand_clash(node, *clash);
                continue;
            }
            if (emitted_.insert(signature(node.step)).second)
                out.refinements.push_back(node.step);
        }
        return out;
    }

private:
    void push(Node node) {
        std::string sig = signature(node.step);
        if (!seen_.insert(sig + "|" + std::to_string(node.private_open.size())).second) return;
        node.seq = next_seq_++;
        node.score = evaluate(agent_, PlanView{agent_.id, node.plan, 0}, rpg_, cfg_);
        queue_.push(std::move(node));
    }

    // Every way to support `og` in `node`: link from an existing step or add
    // one of the agent's own producing actions.
    void branch_supporters(const Node &node, const OpenGoal &og,
                           const std::vector<OpenGoal> &remaining_private) {
        const auto &[consumer, fluent] = og;
        for (const PlanStep &s : node.plan.steps()) {
            if (s.id == consumer || !effects_support(s.eff, fluent)) continue;
            if (node.plan.ordered_before(consumer, s.id)) continue;  // would cycle
            Node child = node;
            child.private_open = remaining_private;
            CausalLink link{s.id, consumer, fluent, agent_.id};
            try {
                child.plan.add_link(link);
            } catch (const PlanError &) {
                continue;
            }
            child.step.added_links.push_back(link);
            push(std::move(child));
        }
        for (ActionId a : agent_.actions) {
            const GroundAction &ga = task_.action(a);
            if (!effects_support(ga.eff, fluent)) continue;
            if (!rpg_.action_level.count(a)) continue;
            Node child = node;
            child.private_open = remaining_private;
            PlanStep s;
            s.id = static_cast<StepId>(child.plan.size());
            s.action = a;
            s.name = ga.name;
            s.owners = ga.owners;
            s.author = agent_.id;
            s.pre = ga.pre;
            s.eff = ga.eff;
            StepId sid = child.plan.add_step(s);
            child.step.added_steps.push_back(child.plan.step(sid));
            CausalLink link{sid, consumer, fluent, agent_.id};
            try {
                child.plan.add_link(link);
            } catch (const PlanError &) {
                continue;
            }
            child.step.added_links.push_back(link);
            for (const Fluent &p : ga.pre)
                if (task_.strictly_private(agent_.id, p))
                    child.private_open.push_back({sid, p});
            push(std::move(child));
        }
    }

    void seed_candidates() {
        Node root;
        root.plan = base_;
        root.step.author = agent_.id;
        root.step.solved_goal = goal_;
        branch_supporters(root, goal_, {});
    }

    void expand_goal(Node &node) {
        // Cheapest private goal first (by the agent's graph), then id order.
        size_t best = 0;
        auto key = [&](const OpenGoal &og) {
            return std::make_tuple(heuristic_cost_or_penalty(rpg_, og.second, cfg_.unreachable_penalty),
                                   og.second, og.first);
        };
        for (size_t i = 1; i < node.private_open.size(); ++i)
            if (key(node.private_open[i]) < key(node.private_open[best])) best = i;
        OpenGoal og = node.private_open[best];
        std::vector<OpenGoal> rest = node.private_open;
        rest.erase(rest.begin() + static_cast<long>(best));
        branch_supporters(node, og, rest);
    }

    void expand_threat(const Node &node, const Threat &t) {
        for (ThreatResolution mode : {ThreatResolution::Promotion, ThreatResolution::Demotion}) {
            StepId before = mode == ThreatResolution::Promotion ? t.threatening_step : t.link.consumer;
            StepId after = mode == ThreatResolution::Promotion ? t.link.producer : t.threatening_step;
            if (node.plan.would_cycle(before, after)) continue;
            Node child = node;
            child.plan.add_ordering(before, after);
            child.step.added_orderings.push_back({before, after});
            push(std::move(child));
        }
    }

    void expand_clash(const Node &node, std::pair<StepId, StepId> clash) {
        for (auto [before, after] : {clash, std::make_pair(clash.second, clash.first)}) {
            if (node.plan.would_cycle(before, after)) continue;
            Node child = node;
            child.plan.add_ordering(before, after);
            child.step.added_orderings.push_back({before, after});
            push(std::move(child));
        }
    }

    const AgentModel &agent_;
    const PartialPlan &base_;
    OpenGoal goal_;
    const Rpg &rpg_;
    SearchBudget budget_;
    const MapTask &task_;
    const EvaluatorConfig &cfg_;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
    std::set<std::string> seen_;
    std::set<std::string> emitted_;
    long next_seq_ = 0;
};

}  // namespace

RefinementList refine(const AgentModel &agent, const PartialPlan &base_view, const OpenGoal &goal,
                      const Rpg &rpg, const SearchBudget &budget, const MapTask &task,
                      const EvaluatorConfig &cfg) {
    if (!can_refine(agent, goal.second))
        throw PlanError("agent " + agent.name + " cannot refine a goal outside its view");
    return RefineSearch(agent, base_view, goal, rpg, budget, task, cfg).run();
}

}  // namespace mapop
