#include "mapop/rpg.hpp"

#include <algorithm>
#include <sstream>

namespace mapop {

std::optional<int> Rpg::cost(const Fluent &f) const {
    std::optional<int> best;
    auto it = level.find(f);
    if (it != level.end()) best = it->second;
    if (!f.positive) {
        auto vars = positive_by_var.find(f.var);
        if (vars != positive_by_var.end()) {
            for (const auto &[value, lvl] : vars->second) {
                if (value == f.value) continue;
                if (!best || lvl < *best) best = lvl;
            }
        }
    }
    return best;
}

std::set<AgentId> Rpg::achiever_set(const Fluent &f) const {
    if (!cost(f)) throw StateError("fluent is absent from the planning graph");
    std::set<AgentId> out;
    auto it = achievers.find(f);
    if (it != achievers.end()) out = it->second;
    if (!f.positive) {
        auto vars = positive_by_var.find(f.var);
        if (vars != positive_by_var.end())
            for (const auto &[value, lvl] : vars->second) {
                if (value == f.value) continue;
                auto a = achievers.find({f.var, value, true});
                if (a != achievers.end()) out.insert(a->second.begin(), a->second.end());
            }
    }
    return out;
}

size_t Rpg::fluent_count() const {
    size_t n = 0;
    for (const auto &[f, lvl] : level)
        if (f.positive) ++n;
    return n;
}

int Rpg::max_fluent_level() const {
    int m = -1;
    for (const auto &[f, lvl] : level) m = std::max(m, lvl);
    return m;
}

int Rpg::max_action_level() const {
    int m = -1;
    for (const auto &[a, lvl] : action_level) m = std::max(m, lvl);
    return m;
}

bool Rpg::integrate(const Fluent &f, int lvl, const std::set<AgentId> &who) {
    bool changed = false;
    auto it = level.find(f);
    if (it == level.end()) {
        level.emplace(f, lvl);
        changed = true;
    } else if (lvl < it->second) {
        it->second = lvl;
        changed = true;
    }
    if (f.positive) {
        auto &slot = positive_by_var[f.var];
        auto vit = slot.find(f.value);
        if (vit == slot.end() || level[f] < vit->second) slot[f.value] = level[f];
    }
    auto &label = achievers[f];
    for (AgentId a : who)
        if (label.insert(a).second) changed = true;
    return changed;
}

namespace {

// Relaxed expansion: delete effects ignored, assigns add positive entries,
// denies add explicit negative entries. Action levels only decrease.
bool expand(Rpg &rpg, const AgentModel &agent, const MapTask &task) {
    bool changed_any = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (ActionId id : agent.actions) {
            const GroundAction &ga = task.action(id);
            int lvl = 0;
            bool applicable = true;
            for (const Fluent &p : ga.pre) {
                auto c = rpg.cost(p);
                if (!c) {
                    applicable = false;
                    break;
                }
                lvl = std::max(lvl, *c);
            }
            if (!applicable) continue;
            auto it = rpg.action_level.find(id);
            if (it == rpg.action_level.end() || lvl < it->second) {
                rpg.action_level[id] = lvl;
                changed = true;
            } else {
                lvl = it->second;
            }
            for (const EffectOp &op : ga.eff) {
                Fluent f{op.var, op.value, op.assign};
                if (rpg.integrate(f, lvl + 1, {agent.id})) changed = true;
            }
        }
        changed_any |= changed;
    }
    return changed_any;
}

std::vector<AgentId> sorted_ids(const std::set<AgentId> &s) { return {s.begin(), s.end()}; }

}  // namespace

Rpg build_initial_rpg(const AgentModel &agent, const MapTask &task) {
    Rpg rpg;
    for (const Fluent &f : agent.init) rpg.integrate(f, 0, {agent.id});
    expand(rpg, agent, task);
    return rpg;
}

ExchangeResult exchange_round(const AgentModel &agent, RpgAgentState &state,
                              const std::vector<FluentAdvert> &inbox, const MapTask &task) {
    ExchangeResult result;
    for (const FluentAdvert &adv : inbox) {
        if (!agent.sees(adv.fluent))
            throw ProtocolError("advert violates visibility: agent " + agent.name +
                                " cannot see the advertised fluent");
        std::set<AgentId> who(adv.achievers.begin(), adv.achievers.end());
        if (state.rpg.integrate(adv.fluent, adv.level, who)) result.changed = true;
    }
    if (expand(state.rpg, agent, task)) result.changed = true;

    for (const AgentModel &peer : task.agents) {
        if (peer.id == agent.id) continue;
        auto &sent = state.sent[peer.id];
        std::vector<FluentAdvert> batch;
        for (const auto &[f, lvl] : state.rpg.level) {
            if (!peer.sees(f)) continue;
            if (!is_shareable(f, agent, peer.id, task)) continue;
            const auto &label = state.rpg.achievers.at(f);
            auto it = sent.find(f);
            if (it != sent.end() && it->second.first <= lvl && it->second.second == label) continue;
            batch.push_back({f, lvl, sorted_ids(label)});
            sent[f] = {lvl, label};
        }
        if (!batch.empty()) result.outbox.emplace(peer.id, std::move(batch));
    }
    return result;
}

std::vector<Rpg> run_fixpoint(
    const MapTask &task,
    const std::function<void(AgentId, AgentId, const std::vector<FluentAdvert> &)> &on_message) {
    size_t n = task.agents.size();
    std::vector<RpgAgentState> states(n);
    for (size_t i = 0; i < n; ++i)
        states[i].rpg = build_initial_rpg(task.agents[i], task);

    std::vector<std::vector<FluentAdvert>> inboxes(n);
    bool delivered = true;
    while (delivered) {
        std::vector<std::vector<FluentAdvert>> next(n);
        delivered = false;
        for (size_t i = 0; i < n; ++i) {
            ExchangeResult r =
                exchange_round(task.agents[i], states[i], inboxes[i], task);
            for (auto &[peer, batch] : r.outbox) {
                if (on_message) on_message(static_cast<AgentId>(i), peer, batch);
                auto &dst = next[static_cast<size_t>(peer)];
                dst.insert(dst.end(), batch.begin(), batch.end());
                delivered = true;
            }
        }
        inboxes = std::move(next);
    }

    std::vector<Rpg> out;
    out.reserve(n);
    for (auto &s : states) out.push_back(std::move(s.rpg));
    return out;
}

int heuristic_cost_or_penalty(const Rpg &rpg, const Fluent &f, int penalty) {
    auto c = rpg.cost(f);
    return c ? *c : penalty;
}

std::string dump_rpg(const Rpg &rpg, const MapTask &task) {
    std::ostringstream os;
    int max_f = rpg.max_fluent_level();
    int max_a = rpg.max_action_level();
    for (int lvl = 0; lvl <= std::max(max_f, 0) && max_f >= 0; ++lvl) {
        std::vector<std::string> lines;
        for (const auto &[f, l] : rpg.level) {
            if (l != lvl || !f.positive) continue;
            std::ostringstream line;
            line << '[';
            bool first = true;
            for (AgentId a : rpg.achievers.at(f)) {
                line << (first ? "" : ",") << a + 1;
                first = false;
            }
            line << "] " << task.vars.info(f.var).display << ' ';
            if (f.value == ObjectTable::kTrue)
                line << 'T';
            else if (f.value == ObjectTable::kFalse)
                line << 'F';
            else
                line << task.objects.name(f.value);
            lines.push_back(line.str());
        }
        std::sort(lines.begin(), lines.end());
        os << 'F' << lvl << '\n';
        for (const auto &l : lines) os << "  " << l << '\n';
        if (lvl <= max_a) {
            std::vector<std::string> acts;
            for (const auto &[a, l] : rpg.action_level)
                if (l == lvl) acts.push_back(task.action(a).name);
            std::sort(acts.begin(), acts.end());
            os << 'A' << lvl << '\n';
            for (const auto &a : acts) os << "  " << a << '\n';
        }
    }
    return os.str();
}

}  // namespace mapop
