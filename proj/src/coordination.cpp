#include "mapop/coordination.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "mapop/pop.hpp"
#include "mapop/runtime.hpp"

namespace mapop {

double evaluate(const AgentModel &observer, const PlanView &v, const Rpg &rpg,
                const EvaluatorConfig &cfg) {
    int steps = 0;
    for (const PlanStep &s : v.plan.steps())
        if (!s.fictitious) ++steps;

    long goal_cost = 0;
    for (const OpenGoal &og : open_goals(v.plan))
        goal_cost += heuristic_cost_or_penalty(rpg, og.second, cfg.unreachable_penalty);

    int supported_private = 0;
    for (const Fluent &pg : observer.private_goals) {
        bool supported = false;
        for (const PlanStep &s : v.plan.steps())
            if (effects_support(s.eff, pg)) supported = true;
        if (supported) ++supported_private;
    }

    return cfg.weight_actions * steps + cfg.weight_open_goal_cost * static_cast<double>(goal_cost) -
           cfg.private_goal_bonus * supported_private;
}

std::optional<OpenGoal> select_open_goal(const PartialPlan &plan, const Rpg &baton_rpg) {
    std::vector<OpenGoal> goals = open_goals(plan);
    if (goals.empty()) return std::nullopt;
    // Highest estimated cost wins; fluents absent from the baton's graph rank
    // highest. Ties break on the lowest (fluent, step).
    auto key = [&](const OpenGoal &og) {
        auto c = baton_rpg.cost(og.second);
        long cost = c ? *c : std::numeric_limits<long>::max();
        return std::make_tuple(-cost, og.second, og.first);
    };
    return *std::min_element(goals.begin(), goals.end(),
                             [&](const OpenGoal &a, const OpenGoal &b) { return key(a) < key(b); });
}

int SearchPool::add(PartialPlan plan, std::vector<double> scores) {
    int id = next_id++;
    entries.emplace(id, PoolEntry{id, std::move(plan), std::move(scores)});
    return id;
}

Ballot cast_ballot(AgentId voter, const SearchPool &pool) {
    Ballot b;
    b.voter = voter;
    for (const auto &[id, entry] : pool.entries) {
        double s = entry.scores.at(static_cast<size_t>(voter));
        if (b.choice < 0 || s < b.score) {
            b.choice = id;
            b.score = s;
        }
    }
    return b;
}

std::optional<PoolEntry> vote_and_adopt(SearchPool &pool, const std::vector<Ballot> &ballots,
                                        AgentId baton) {
    if (pool.empty()) return std::nullopt;
    std::map<int, int> tally;
    for (const Ballot &b : ballots) {
        if (!pool.entries.count(b.choice))
            throw PlanError("ballot names a plan outside the pool");
        ++tally[b.choice];
    }
    int best_votes = 0;
    for (const auto &[id, votes] : tally) best_votes = std::max(best_votes, votes);
    // In case of a draw the baton agent chooses among the most voted
    // alternatives (its own best score, then lowest id).
    int winner = -1;
    double winner_score = 0;
    for (const auto &[id, votes] : tally) {
        if (votes != best_votes) continue;
        double s = pool.entries.at(id).scores.at(static_cast<size_t>(baton));
        if (winner < 0 || s < winner_score) {
            winner = id;
            winner_score = s;
        }
    }
    PoolEntry entry = std::move(pool.entries.at(winner));
    pool.entries.erase(winner);
    return entry;
}

bool confirm_solution(const PartialPlan &plan, const MapTask &task) {
    for (const AgentModel &agent : task.agents) {
        PlanView v = view(plan, agent, task, /*wire_filter=*/true);
        if (!open_goals(v.plan).empty()) return false;
    }
    return is_solution(plan, task);
}

// ---------------------------------------------------------------------------
// Resolution loop (Alg. 3)

namespace {

class Loop {
public:
    Loop(const MapTask &task, const std::vector<Rpg> &rpgs, Bus &bus, const EvaluatorConfig &cfg,
         const SearchBudget &budget, const ResolutionOptions &opts)
        : task_(task), rpgs_(rpgs), bus_(bus), cfg_(cfg), budget_(budget), opts_(opts) {
        order_ = opts.agent_order;
        if (order_.empty())
            for (const AgentModel &a : task_.agents) order_.push_back(a.id);
    }

    SolutionReport run() {
        SolutionReport report;
        PartialPlan base = empty_plan(task_);
        SearchPool pool;
        AgentId baton = opts_.initial_baton;
        int n = static_cast<int>(task_.agents.size());

        while (true) {
            if (report.rounds >= opts_.max_rounds) {
                report.termination = "round-budget";
                report.plan = base;
                return report;
            }
            ++report.rounds;

            if (open_goals(base).empty()) {
                if (run_confirmation(base, report.rounds)) {
                    report.status = SolutionReport::Status::Solved;
                    report.termination = "solved";
                    report.plan = base;
                    return report;
                }
                trace("round=" + std::to_string(report.rounds) + " event=dead_base");
            } else {
                refinement_phase(base, pool, baton, report);
            }

            if (pool.empty()) {
                report.termination = "pool-exhausted";
                report.plan = base;
                return report;
            }

            std::vector<Ballot> ballots;
            for (AgentId i : order_) {
                Ballot b = cast_ballot(i, pool);
                ballots.push_back(b);
                broadcast(i, report.rounds, BallotMsg{b.choice});
                trace("round=" + std::to_string(report.rounds) + " agent=" + task_.agent(i).name +
                      " event=ballot plan=" + std::to_string(b.choice));
            }
            auto winner = vote_and_adopt(pool, ballots, baton);
            base = winner->plan;
            trace("round=" + std::to_string(report.rounds) +
                  " event=winner plan=" + std::to_string(winner->id));

            AgentId next = static_cast<AgentId>((baton + 1) % n);
            bus_.send({baton, next, report.rounds, BatonTransfer{next}});
            trace("round=" + std::to_string(report.rounds) +
                  " event=baton_to agent=" + task_.agent(next).name);
            baton = next;
        }
    }

private:
    void trace(const std::string &line) {
        if (opts_.trace) *opts_.trace << line << '\n';
    }

    void broadcast(AgentId from, int round, const Payload &payload) {
        for (const AgentModel &peer : task_.agents) {
            if (peer.id == from) continue;
            bus_.send({from, peer.id, round, payload});
        }
    }

    bool run_confirmation(const PartialPlan &base, int round) {
        bool all_confirm = true;
        for (AgentId i : order_) {
            PlanView v = view(base, task_.agent(i), task_, /*wire_filter=*/true);
            int visible_open = static_cast<int>(open_goals(v.plan).size());
            bool ok = visible_open == 0;
            broadcast(i, round, SolutionConfirm{ok, visible_open});
            trace("round=" + std::to_string(round) + " agent=" + task_.agent(i).name +
                  " event=confirm ok=" + std::to_string(ok));
            all_confirm &= ok;
        }
        return all_confirm && is_solution(base, task_);
    }

    // The baton agent selects a goal from its view; agents that hold no
    // visible open goal pass the baton on.
    std::optional<OpenGoal> select_with_rotation(const PartialPlan &base, AgentId &baton,
                                                 int round) {
        int n = static_cast<int>(task_.agents.size());
        for (int attempt = 0; attempt < n; ++attempt) {
            PlanView v = view(base, task_.agent(baton), task_, /*wire_filter=*/true);
            auto g = select_open_goal(v.plan, rpgs_[static_cast<size_t>(baton)]);
            if (g) return g;
            AgentId next = static_cast<AgentId>((baton + 1) % n);
            bus_.send({baton, next, round, BatonTransfer{next}});
            trace("round=" + std::to_string(round) +
                  " event=baton_pass agent=" + task_.agent(next).name);
            baton = next;
        }
        return std::nullopt;
    }

    void refinement_phase(const PartialPlan &base, SearchPool &pool, AgentId &baton,
                          SolutionReport &report) {
        int round = report.rounds;
        auto g = select_with_rotation(base, baton, round);
        if (!g) return;  // nobody sees an open goal; adoption may still continue

        trace("round=" + std::to_string(round) + " baton=" + task_.agent(baton).name +
              " event=goal_selected step=" + std::to_string(g->first) + " fluent=\"" +
              task_.fluent_name(g->second) + "\"");
        for (const AgentModel &peer : task_.agents) {
            if (peer.id == baton) continue;
            GoalSelection sel{g->first, std::nullopt};
            if (peer.sees(g->second) &&
                is_shareable(g->second, task_.agent(baton), peer.id, task_))
                sel.fluent = g->second;
            bus_.send({baton, peer.id, round, sel});
        }

        for (AgentId i : order_) {
            const AgentModel &agent = task_.agent(i);
            if (!can_refine(agent, g->second)) continue;
            PlanView v = view(base, agent, task_, /*wire_filter=*/true);
            bool visible_open = false;
            for (const OpenGoal &og : open_goals(v.plan))
                if (og == *g) visible_open = true;
            if (!visible_open) continue;

            RefinementList result =
                refine(agent, v.plan, *g, rpgs_[static_cast<size_t>(i)], budget_, task_, cfg_);
            report.expanded_nodes += result.nodes_expanded;
            if (result.refinements.empty()) {
                trace("round=" + std::to_string(round) + " agent=" + agent.name +
                      " event=no_refinements");
                continue;
            }
            trace("round=" + std::to_string(round) + " agent=" + agent.name +
                  " event=proposals count=" + std::to_string(result.refinements.size()));
            for (const AgentModel &peer : task_.agents) {
                if (peer.id == i) continue;
                RefinementBatch batch;
                batch.base_plan = -1;
                for (const RefinementStep &s : result.refinements)
                    batch.refinements.push_back(filter_refinement(s, agent, peer));
                bus_.send({i, peer.id, round, batch});
            }
            for (const RefinementStep &s : result.refinements) pool_proposal(base, s, pool, round);
        }
    }

    // Wire form of a refinement for one recipient: links whose fluent the
    // recipient may not learn decay to orderings; step content is elided.
    RefinementStep filter_refinement(const RefinementStep &s, const AgentModel &author,
                                     const AgentModel &recipient) {
        RefinementStep out;
        out.author = s.author;
        out.solved_goal.first = s.solved_goal.first;
        auto known = [&](const Fluent &f) {
            return recipient.sees(f) && is_shareable(f, author, recipient.id, task_);
        };
        out.solved_goal.second =
            known(s.solved_goal.second) ? s.solved_goal.second : Fluent{-1, -1, true};
        for (const PlanStep &st : s.added_steps) {
            PlanStep copy = st;
            copy.pre.clear();
            copy.eff.clear();
            for (const Fluent &p : st.pre)
                if (known(p)) copy.pre.push_back(p);
            for (const EffectOp &e : st.eff)
                if (known({e.var, e.value, e.assign})) copy.eff.push_back(e);
            out.added_steps.push_back(std::move(copy));
        }
        out.added_orderings = s.added_orderings;
        for (const CausalLink &l : s.added_links) {
            if (known(l.fluent))
                out.added_links.push_back(l);
            else
                out.added_orderings.push_back({l.producer, l.consumer});
        }
        return out;
    }

    void pool_proposal(const PartialPlan &base, const RefinementStep &s, SearchPool &pool,
                       int round) {
        PartialPlan composed;
        try {
            composed = compose(base, s);
        } catch (const PlanError &) {
            trace("round=" + std::to_string(round) + " event=proposal_rejected reason=compose");
            return;
        }
        // Def. 9/8 enforcement: refinement plans are threat-free multi-agent
        // concurrent plans; authors repair what they see, the coordinator
        // enforces what they cannot.
        if (!threats(composed).empty() || !is_concurrent_plan(composed, task_)) {
            trace("round=" + std::to_string(round) + " event=proposal_rejected reason=flaws");
            return;
        }
        std::vector<double> scores;
        for (const AgentModel &agent : task_.agents) {
            PlanView v = view(composed, agent, task_, /*wire_filter=*/true);
            scores.push_back(evaluate(agent, v, rpgs_[static_cast<size_t>(agent.id)], cfg_));
        }
        int id = pool.add(std::move(composed), std::move(scores));
        trace("round=" + std::to_string(round) + " event=pooled plan=" + std::to_string(id) +
              " author=" + task_.agent(s.author).name);
    }

    const MapTask &task_;
    const std::vector<Rpg> &rpgs_;
    Bus &bus_;
    EvaluatorConfig cfg_;
    SearchBudget budget_;
    ResolutionOptions opts_;
    std::vector<AgentId> order_;
};

}  // namespace

SolutionReport resolution_loop(const MapTask &task, const std::vector<Rpg> &rpgs, Bus &bus,
                               const EvaluatorConfig &cfg, const SearchBudget &budget,
                               const ResolutionOptions &opts) {
    return Loop(task, rpgs, bus, cfg, budget, opts).run();
}

}  // namespace mapop
