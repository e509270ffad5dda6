#include "mapop/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "mapop/parser.hpp"

namespace mapop {

const char *payload_type_name(const Payload &p) {
    switch (p.index()) {
    case 0: return "FluentAdvertBatch";
    case 1: return "RefinementBatch";
    case 2: return "BallotMsg";
    case 3: return "GoalSelection";
    case 4: return "BatonTransfer";
    case 5: return "SolutionConfirm";
    }
    return "?";
}

std::vector<Fluent> payload_fluents(const Payload &p) {
    std::vector<Fluent> out;
    if (const auto *batch = std::get_if<FluentAdvertBatch>(&p)) {
        for (const FluentAdvert &a : batch->adverts) out.push_back(a.fluent);
    } else if (const auto *refs = std::get_if<RefinementBatch>(&p)) {
        for (const RefinementStep &s : refs->refinements) {
            if (s.solved_goal.second.var >= 0) out.push_back(s.solved_goal.second);
            for (const PlanStep &st : s.added_steps) {
                out.insert(out.end(), st.pre.begin(), st.pre.end());
                for (const EffectOp &e : st.eff) out.push_back({e.var, e.value, e.assign});
            }
            for (const CausalLink &l : s.added_links) out.push_back(l.fluent);
        }
    } else if (const auto *sel = std::get_if<GoalSelection>(&p)) {
        if (sel->fluent) out.push_back(*sel->fluent);
    }
    return out;
}

void Bus::send(Envelope env) {
    bool advert = std::holds_alternative<FluentAdvertBatch>(env.payload);
    if (phase_ == Phase::InformationExchange && !advert)
        throw ProtocolError(std::string("payload ") + payload_type_name(env.payload) +
                            " is illegal during the information exchange phase");
    if (phase_ == Phase::Resolution && advert)
        throw ProtocolError("FluentAdvertBatch is illegal during the resolution phase");
    if (env.to < 0 || static_cast<size_t>(env.to) >= inboxes_.size())
        throw ProtocolError("envelope addressed to an unknown agent");
    if (phase_ == Phase::InformationExchange)
        ++phase1_;
    else
        ++phase2_;
    ++per_type_[payload_type_name(env.payload)];
    if (interceptor_) interceptor_(env);
    inboxes_[static_cast<size_t>(env.to)].push_back(std::move(env));
}

std::vector<Envelope> Bus::drain(AgentId agent) {
    auto &q = inboxes_.at(static_cast<size_t>(agent));
    std::vector<Envelope> out(q.begin(), q.end());
    q.clear();
    return out;
}

SpawnResult spawn(const RunConfig &config) {
    SpawnResult result;
    if (config.agent_inputs.empty()) {
        result.diags.push_back(
            {Severity::Error, {0, 0}, "<config>", "at least one --agent input is required"});
        return result;
    }
    std::vector<ValidatedAgentInput> inputs;
    for (const auto &[domain_path, problem_path] : config.agent_inputs) {
        auto d = parse_domain_file(domain_path);
        result.diags.insert(result.diags.end(), d.diags.begin(), d.diags.end());
        auto p = parse_problem_file(problem_path);
        result.diags.insert(result.diags.end(), p.diags.begin(), p.diags.end());
        if (!d.value || !p.value) continue;
        auto v = validate_pair(*d.value, *p.value, domain_path, problem_path);
        result.diags.insert(result.diags.end(), v.diags.begin(), v.diags.end());
        if (v.value) inputs.push_back(std::move(*v.value));
    }
    if (has_errors(result.diags)) return result;

    auto task = ground_task(inputs, result.diags);
    if (!task) return result;
    result.pool.emplace(std::move(*task), config);
    return result;
}

RunReport run(AgentPool &pool) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    const MapTask &task = pool.task();
    const RunConfig &config = pool.config();
    Bus &bus = pool.bus();

    // Phase 1: dis-RPG fixpoint. Messages are materialized on the bus for
    // accounting and interception; delivery itself is synchronous.
    bus.set_phase(Bus::Phase::InformationExchange);
    int advert_round = 0;
    report.rpgs = run_fixpoint(task, [&](AgentId from, AgentId to,
                                         const std::vector<FluentAdvert> &batch) {
        bus.send({from, to, advert_round, FluentAdvertBatch{batch}});
        bus.drain(to);
    });

    // Phase 2: resolution.
    bus.set_phase(Bus::Phase::Resolution);
    std::mt19937 rng(config.seed);
    ResolutionOptions opts;
    opts.initial_baton = 0;
    if (config.random_baton)
        opts.initial_baton =
            static_cast<AgentId>(rng() % static_cast<unsigned>(task.agents.size()));
    opts.max_rounds = config.max_rounds;
    opts.trace = config.trace;
    if (config.scheduler == RunConfig::Scheduler::SeededRandom) {
        std::vector<AgentId> order(task.agents.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        opts.agent_order = order;
    }
    report.solution = resolution_loop(task, report.rpgs, bus, config.evaluator, config.budget, opts);

    report.messages = message_stats(pool);
    report.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return report;
}

MessageStats message_stats(const AgentPool &pool) {
    MessageStats s;
    s.total = pool.bus().total_messages();
    s.phase1 = pool.bus().phase1_messages();
    s.phase2 = pool.bus().phase2_messages();
    s.per_type = pool.bus().per_type();
    return s;
}

}  // namespace mapop
