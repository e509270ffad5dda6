#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mapop/coordination.hpp"
#include "mapop/pop.hpp"
#include "mapop/rpg.hpp"

namespace mapop {

struct FluentAdvertBatch {
    std::vector<FluentAdvert> adverts;
};

struct RefinementBatch {
    int base_plan = -1;
    std::vector<RefinementStep> refinements;  // privacy-filtered per recipient
};

struct BallotMsg {
    int plan_id = -1;
};

struct GoalSelection {
    StepId step = -1;
    std::optional<Fluent> fluent;  // absent when the recipient may not learn it
};

struct BatonTransfer {
    AgentId new_holder = kNoAgent;
};

struct SolutionConfirm {
    bool confirmed = false;
    int visible_open_goals = 0;
};

using Payload = std::variant<FluentAdvertBatch, RefinementBatch, BallotMsg, GoalSelection,
                             BatonTransfer, SolutionConfirm>;

struct Envelope {
    AgentId from = kNoAgent;
    AgentId to = kNoAgent;
    int round = 0;
    Payload payload;
};

const char *payload_type_name(const Payload &p);
// Every fluent carried by the payload; the privacy interceptor checks each
// against the sender's share patterns and the recipient's visibility.
std::vector<Fluent> payload_fluents(const Payload &p);

// In-process message bus with per-agent inbound queues. Phase guards reject
// payloads that are illegal for the current protocol phase.
class Bus {
public:
    enum class Phase { Setup, InformationExchange, Resolution };

    explicit Bus(int agent_count) : inboxes_(static_cast<size_t>(agent_count)) {}

    void set_phase(Phase p) { phase_ = p; }
    Phase phase() const { return phase_; }

    void send(Envelope env);
    std::vector<Envelope> drain(AgentId agent);

    using Interceptor = std::function<void(const Envelope &)>;
    void set_interceptor(Interceptor fn) { interceptor_ = std::move(fn); }

    long total_messages() const { return phase1_ + phase2_; }
    long phase1_messages() const { return phase1_; }
    long phase2_messages() const { return phase2_; }
    const std::map<std::string, long> &per_type() const { return per_type_; }

private:
    std::vector<std::deque<Envelope>> inboxes_;
    Phase phase_ = Phase::Setup;
    long phase1_ = 0;
    long phase2_ = 0;
    std::map<std::string, long> per_type_;
    Interceptor interceptor_;
};

struct MessageStats {
    long total = 0;
    long phase1 = 0;
    long phase2 = 0;
    std::map<std::string, long> per_type;
};

struct RunConfig {
    std::vector<std::pair<std::string, std::string>> agent_inputs;  // (domain, problem) paths
    unsigned seed = 0;
    bool random_baton = false;  // paper default assigns the baton randomly
    EvaluatorConfig evaluator;
    SearchBudget budget;
    enum class Scheduler { Deterministic, SeededRandom } scheduler = Scheduler::Deterministic;
    int max_rounds = 500;
    std::ostream *trace = nullptr;
};

class AgentPool {
public:
    AgentPool(MapTask task, RunConfig config)
        : task_(std::move(task)), config_(std::move(config)),
          bus_(static_cast<int>(task_.agents.size())) {}

    const MapTask &task() const { return task_; }
    const RunConfig &config() const { return config_; }
    Bus &bus() { return bus_; }
    const Bus &bus() const { return bus_; }

private:
    MapTask task_;
    RunConfig config_;
    Bus bus_;
};

struct SpawnResult {
    std::optional<AgentPool> pool;
    std::vector<Diagnostic> diags;
};

// Parses, validates and grounds every agent input; wires the bus.
SpawnResult spawn(const RunConfig &config);

struct RunReport {
    SolutionReport solution;
    MessageStats messages;
    std::vector<Rpg> rpgs;
    double runtime_ms = 0.0;
};

// Phase 1 (dis-RPG fixpoint) then Phase 2 (resolution loop).
RunReport run(AgentPool &pool);

MessageStats message_stats(const AgentPool &pool);

}  // namespace mapop
