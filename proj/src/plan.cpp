#include "mapop/plan.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mapop {

namespace {
constexpr size_t kWord = 64;
inline size_t words_for(size_t n) { return (n + kWord - 1) / kWord; }
}  // namespace

bool PartialPlan::reach(StepId a, StepId b) const {
    const auto &row = reach_[static_cast<size_t>(a)];
    size_t idx = static_cast<size_t>(b);
    return (row[idx / kWord] >> (idx % kWord)) & 1;
}

void PartialPlan::set_reach(StepId a, StepId b) {
    auto &row = reach_[static_cast<size_t>(a)];
    size_t idx = static_cast<size_t>(b);
    row[idx / kWord] |= uint64_t{1} << (idx % kWord);
}

void PartialPlan::grow_reach() {
    size_t n = steps_.size();
    size_t w = words_for(n);
    for (auto &row : reach_) row.resize(w, 0);
    reach_.resize(n, std::vector<uint64_t>(w, 0));
}

void PartialPlan::propagate(StepId u, StepId v) {
    // u now precedes v: everything reaching (or equal to) u reaches v and
    // everything v reaches.
    const auto target = reach_[static_cast<size_t>(v)];
    size_t n = steps_.size();
    for (size_t w = 0; w < n; ++w) {
        if (static_cast<StepId>(w) != u && !reach(static_cast<StepId>(w), u)) continue;
        auto &row = reach_[w];
        for (size_t k = 0; k < target.size(); ++k) row[k] |= target[k];
        set_reach(static_cast<StepId>(w), v);
    }
}

StepId PartialPlan::add_step(PlanStep step) {
    StepId id = static_cast<StepId>(steps_.size());
    step.id = id;
    steps_.push_back(std::move(step));
    grow_reach();
    if (id != kInitStep && id != kGoalStep) {
        propagate(kInitStep, id);
        propagate(id, kGoalStep);
    }
    return id;
}

bool PartialPlan::would_cycle(StepId before, StepId after) const {
    return before == after || reach(after, before);
}

void PartialPlan::add_ordering(StepId before, StepId after) {
    if (before < 0 || after < 0 || static_cast<size_t>(before) >= steps_.size() ||
        static_cast<size_t>(after) >= steps_.size())
        throw PlanError("ordering references a step outside the plan");
    if (would_cycle(before, after))
        throw PlanError("ordering " + std::to_string(before) + " < " + std::to_string(after) +
                        " would introduce a cycle");
    orderings_.insert({before, after});
    if (!reach(before, after)) propagate(before, after);
}

bool effects_support(const std::vector<EffectOp> &eff, const Fluent &f) {
    for (const EffectOp &op : eff) {
        if (op.var != f.var) continue;
        if (f.positive) {
            if (op.assign && op.value == f.value) return true;
        } else {
            if (!op.assign && op.value == f.value) return true;
            if (op.assign && op.value != f.value) return true;
        }
    }
    return false;
}

void PartialPlan::add_link(CausalLink link) {
    if (link.producer < 0 || link.consumer < 0 ||
        static_cast<size_t>(link.producer) >= steps_.size() ||
        static_cast<size_t>(link.consumer) >= steps_.size())
        throw PlanError("causal link references a step outside the plan");
    const PlanStep &producer = step(link.producer);
    const PlanStep &consumer = step(link.consumer);
    if (!effects_support(producer.eff, link.fluent))
        throw PlanError("producer " + producer.name + " does not support the link fluent");
    if (!std::binary_search(consumer.pre.begin(), consumer.pre.end(), link.fluent))
        throw PlanError("consumer " + consumer.name + " does not require the link fluent");
    if (would_cycle(link.producer, link.consumer))
        throw PlanError("causal link would introduce a cycle");
    links_.push_back(link);
    if (!reach(link.producer, link.consumer)) propagate(link.producer, link.consumer);
}

bool PartialPlan::ordered_before(StepId a, StepId b) const {
    if (a == b) return false;
    return reach(a, b);
}

bool PartialPlan::supported(StepId consumer, const Fluent &f) const {
    for (const CausalLink &l : links_)
        if (l.consumer == consumer && l.fluent == f) return true;
    return false;
}

bool PartialPlan::fully_supported(StepId s) const {
    for (const Fluent &p : step(s).pre)
        if (!supported(s, p)) return false;
    return true;
}

PartialPlan empty_plan(const MapTask &task) {
    if (task.goals.empty()) throw PlanError("the task has no global goals");
    PartialPlan plan;
    const GroundAction &init = task.action(kInitAction);
    const GroundAction &goal = task.action(kGoalAction);
    plan.add_step({kInitStep, kInitAction, init.name, {}, kNoAgent, init.pre, init.eff, true});
    plan.add_step({kGoalStep, kGoalAction, goal.name, {}, kNoAgent, goal.pre, goal.eff, true});
    plan.add_ordering(kInitStep, kGoalStep);
    return plan;
}

std::vector<OpenGoal> open_goals(const PartialPlan &plan) {
    std::vector<OpenGoal> out;
    for (const PlanStep &s : plan.steps())
        for (const Fluent &p : s.pre)
            if (!plan.supported(s.id, p)) out.push_back({s.id, p});
    return out;
}

namespace {

bool step_threatens(const PlanStep &s, const Fluent &f) {
    for (const EffectOp &op : s.eff) {
        if (op.var != f.var) continue;
        if (f.positive) {
            if (op.assign && op.value != f.value) return true;
            if (!op.assign && op.value == f.value) return true;
        } else {
            if (op.assign && op.value == f.value) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<Threat> threats(const PartialPlan &plan) {
    std::vector<Threat> out;
    for (const CausalLink &l : plan.links()) {
        for (const PlanStep &s : plan.steps()) {
            if (s.id == l.producer || s.id == l.consumer) continue;
            if (!step_threatens(s, l.fluent)) continue;
            if (plan.ordered_before(s.id, l.producer) || plan.ordered_before(l.consumer, s.id))
                continue;
            out.push_back({s.id, l});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PartialPlan resolve_threat(const PartialPlan &plan, const Threat &threat, ThreatResolution mode) {
    std::vector<Threat> current = threats(plan);
    if (std::find(current.begin(), current.end(), threat) == current.end())
        throw PlanError("threat is not present in the plan");
    PartialPlan out = plan;
    if (mode == ThreatResolution::Promotion)
        out.add_ordering(threat.threatening_step, threat.link.producer);
    else
        out.add_ordering(threat.link.consumer, threat.threatening_step);
    return out;
}

bool PairVisibility::var_shared(VarId v) const {
    auto side_sees = [&](const std::vector<AgentId> &side) {
        for (AgentId i : side)
            if (task->agent(i).sees_var(v)) return true;
        return false;
    };
    return side_sees(left) && side_sees(right);
}

bool PairVisibility::value_shared(VarId v, ObjectId d) const {
    auto side_sees = [&](const std::vector<AgentId> &side) {
        for (AgentId i : side)
            if (task->agent(i).sees_value(v, d)) return true;
        return false;
    };
    return side_sees(left) && side_sees(right);
}

unsigned consistency_clauses(const std::vector<Fluent> &pre_a, const std::vector<EffectOp> &eff_a,
                             const std::vector<Fluent> &pre_b, const std::vector<EffectOp> &eff_b,
                             const PairVisibility &vis) {
    unsigned clauses = 0;
    auto shared = [&](VarId v, ObjectId d) { return vis.var_shared(v) && vis.value_shared(v, d); };

    auto effect_pre = [&](const std::vector<EffectOp> &eff, const std::vector<Fluent> &pre) {
        for (const EffectOp &op : eff) {
            if (!op.assign || !shared(op.var, op.value)) continue;
            for (const Fluent &p : pre) {
                if (p.var != op.var) continue;
                if (p.positive && p.value != op.value) return true;
                if (!p.positive && p.value == op.value) return true;
            }
        }
        return false;
    };
    if (effect_pre(eff_a, pre_b) || effect_pre(eff_b, pre_a)) clauses |= 1u;

    auto effect_effect = [&]() {
        for (const EffectOp &oa : eff_a) {
            if (!oa.assign || !shared(oa.var, oa.value)) continue;
            for (const EffectOp &ob : eff_b) {
                if (ob.var != oa.var) continue;
                if (ob.assign && ob.value != oa.value) return true;
                if (!ob.assign && ob.value == oa.value) return true;
            }
        }
        for (const EffectOp &ob : eff_b) {
            if (!ob.assign || !shared(ob.var, ob.value)) continue;
            for (const EffectOp &oa : eff_a) {
                if (oa.var != ob.var) continue;
                if (!oa.assign && oa.value == ob.value) return true;
            }
        }
        return false;
    };
    if (effect_effect()) clauses |= 2u;

    auto pre_pre = [&]() {
        for (const Fluent &pa : pre_a) {
            if (!pa.positive || !shared(pa.var, pa.value)) continue;
            for (const Fluent &pb : pre_b) {
                if (pb.var != pa.var) continue;
                if (pb.positive && pb.value != pa.value) return true;
                if (!pb.positive && pb.value == pa.value) return true;
            }
        }
        for (const Fluent &pb : pre_b) {
            if (!pb.positive || !shared(pb.var, pb.value)) continue;
            for (const Fluent &pa : pre_a) {
                if (pa.var != pb.var) continue;
                if (!pa.positive && pa.value == pb.value) return true;
            }
        }
        return false;
    };
    if (pre_pre()) clauses |= 4u;

    return clauses;
}

namespace {

PairVisibility pair_visibility(const std::vector<AgentId> &a, const std::vector<AgentId> &b,
                               const MapTask &task) {
    PairVisibility vis;
    vis.task = &task;
    vis.left = a;
    vis.right = b;
    // Fictitious actions carry no owners; they see everything.
    if (vis.left.empty())
        for (const AgentModel &m : task.agents) vis.left.push_back(m.id);
    if (vis.right.empty())
        for (const AgentModel &m : task.agents) vis.right.push_back(m.id);
    return vis;
}

}  // namespace

bool mutually_consistent(const GroundAction &a, const GroundAction &b, const MapTask &task) {
    PairVisibility vis = pair_visibility(a.owners, b.owners, task);
    return consistency_clauses(a.pre, a.eff, b.pre, b.eff, vis) == 0;
}

bool mutually_consistent_steps(const PlanStep &a, const PlanStep &b, const MapTask &task) {
    PairVisibility vis = pair_visibility(a.owners, b.owners, task);
    return consistency_clauses(a.pre, a.eff, b.pre, b.eff, vis) == 0;
}

bool is_public_step(const PlanStep &s, const MapTask &task) {
    if (s.fictitious) return false;
    if (s.owners.size() > 1) return true;
    std::set<VarId> touched;
    for (const Fluent &p : s.pre) touched.insert(p.var);
    for (const EffectOp &e : s.eff) touched.insert(e.var);
    for (VarId v : touched)
        if (task.visible_agent_count(v) > 1) return true;
    return false;
}

bool is_concurrent_plan(const PartialPlan &plan, const MapTask &task) {
    const auto &steps = plan.steps();
    for (size_t i = 0; i < steps.size(); ++i) {
        if (!is_public_step(steps[i], task) || !plan.fully_supported(steps[i].id)) continue;
        for (size_t j = i + 1; j < steps.size(); ++j) {
            if (!is_public_step(steps[j], task) || !plan.fully_supported(steps[j].id)) continue;
            if (!plan.unordered(steps[i].id, steps[j].id)) continue;
            if (!mutually_consistent_steps(steps[i], steps[j], task)) return false;
        }
    }
    return true;
}

bool is_solution(const PartialPlan &plan, const MapTask &task) {
    if (!open_goals(plan).empty()) return false;
    if (!threats(plan).empty()) return false;
    // Every pair of steps must be mutually consistent or ordered.
    const auto &steps = plan.steps();
    for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].fictitious) continue;
        for (size_t j = i + 1; j < steps.size(); ++j) {
            if (steps[j].fictitious) continue;
            if (!plan.unordered(steps[i].id, steps[j].id)) continue;
            if (!mutually_consistent_steps(steps[i], steps[j], task)) return false;
        }
    }
    return true;
}

PartialPlan compose(const PartialPlan &base, const RefinementStep &step) {
    PartialPlan out = base;
    StepId next = static_cast<StepId>(base.size());
    for (const PlanStep &s : step.added_steps) {
        PlanStep copy = s;
        if (copy.id != next)
            throw PlanError("refinement step ids must be contiguous after the base plan");
        if (copy.author == kNoAgent) copy.author = step.author;
        out.add_step(std::move(copy));
        ++next;
    }
    for (const auto &[before, after] : step.added_orderings) out.add_ordering(before, after);
    for (const CausalLink &l : step.added_links) {
        CausalLink copy = l;
        if (copy.author == kNoAgent) copy.author = step.author;
        out.add_link(copy);
    }
    return out;
}

PlanView view(const PartialPlan &plan, const AgentModel &observer, const MapTask &task,
              bool wire_filter) {
    PlanView v;
    v.observer = observer.id;
    auto fluent_known = [&](const Fluent &f, AgentId author) {
        if (!observer.sees(f)) return false;
        if (!wire_filter) return true;
        if (author == observer.id || author == kNoAgent) return true;
        return is_shareable(f, task.agent(author), observer.id, task);
    };

    for (const PlanStep &s : plan.steps()) {
        PlanStep copy = s;
        if (!s.fictitious) {
            AgentId author = s.author;
            copy.pre.clear();
            copy.eff.clear();
            for (const Fluent &p : s.pre)
                if (fluent_known(p, author)) copy.pre.push_back(p);
            for (const EffectOp &e : s.eff)
                if (fluent_known({e.var, e.value, e.assign}, author)) copy.eff.push_back(e);
        }
        v.plan.add_step(std::move(copy));
    }
    for (const auto &[b, a] : plan.orderings()) v.plan.add_ordering(b, a);
    for (const CausalLink &l : plan.links()) {
        if (fluent_known(l.fluent, l.author) &&
            effects_support(v.plan.step(l.producer).eff, l.fluent) &&
            std::binary_search(v.plan.step(l.consumer).pre.begin(),
                               v.plan.step(l.consumer).pre.end(), l.fluent)) {
            v.plan.add_link(l);
        } else {
            // Occlusion keeps the edge: the link decays to an ordering.
            if (v.plan.orderings().count({l.producer, l.consumer}) == 0)
                v.plan.add_ordering(l.producer, l.consumer);
            ++v.occluded_links;
        }
    }
    return v;
}

std::pair<int, int> makespan_and_parallelism(const PartialPlan &plan, const MapTask &task) {
    if (!is_solution(plan, task)) throw PlanError("makespan requires a solution plan");
    size_t n = plan.size();
    std::vector<std::vector<StepId>> succ(n);
    std::vector<int> indeg(n, 0);
    auto add_edge = [&](StepId a, StepId b) {
        succ[static_cast<size_t>(a)].push_back(b);
        ++indeg[static_cast<size_t>(b)];
    };
    for (const auto &[a, b] : plan.orderings()) add_edge(a, b);
    for (const CausalLink &l : plan.links()) add_edge(l.producer, l.consumer);

    std::vector<int> est(n, 0);
    std::vector<StepId> queue;
    for (size_t s = 0; s < n; ++s)
        if (indeg[s] == 0) queue.push_back(static_cast<StepId>(s));
    size_t qi = 0;
    while (qi < queue.size()) {
        StepId u = queue[qi++];
        bool real_u = !plan.step(u).fictitious;
        for (StepId w : succ[static_cast<size_t>(u)]) {
            est[static_cast<size_t>(w)] =
                std::max(est[static_cast<size_t>(w)], est[static_cast<size_t>(u)] + (real_u ? 1 : 0));
            if (--indeg[static_cast<size_t>(w)] == 0) queue.push_back(w);
        }
    }

    int time_steps = 0;
    std::map<int, int> starts;
    for (const PlanStep &s : plan.steps()) {
        if (s.fictitious) continue;
        time_steps = std::max(time_steps, est[static_cast<size_t>(s.id)] + 1);
        ++starts[est[static_cast<size_t>(s.id)]];
    }
    int parallelism = 0;
    for (const auto &[t, c] : starts) parallelism = std::max(parallelism, c);
    return {time_steps, parallelism};
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_plan(const PartialPlan &plan, const MapTask &task) {
    std::ostringstream os;
    os << "plan v1\n";
    for (const PlanStep &s : plan.steps()) {
        os << "step " << s.id << ' '
           << (s.author == kNoAgent ? std::string("-") : task.agent(s.author).name) << ' '
           << task.qualified_action_name(s.action) << '\n';
    }
    for (const auto &[a, b] : plan.orderings()) os << "ordering " << a << ' ' << b << '\n';
    std::vector<CausalLink> ls = plan.links();
    std::sort(ls.begin(), ls.end());
    for (const CausalLink &l : ls) {
        const VariableInfo &v = task.vars.info(l.fluent.var);
        os << "link " << l.producer << ' ' << l.consumer << ' '
           << (l.fluent.positive ? "pos" : "neg") << ' '
           << (l.author == kNoAgent ? std::string("-") : task.agent(l.author).name) << ' '
           << v.display << ' ' << task.objects.name(l.fluent.value) << '\n';
    }
    return os.str();
}

namespace {

// Parses "(head a b)" back into a variable id; scoped heads resolve against
// the author's scope first, then any agent's.
VarId parse_var(const std::string &term, const MapTask &task, AgentId author) {
    std::string inner = term;
    if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')')
        inner = inner.substr(1, inner.size() - 2);
    std::istringstream ss(inner);
    std::string head, tok;
    ss >> head;
    std::vector<ObjectId> args;
    while (ss >> tok) args.push_back(task.objects.find(tok));
    VarId v = task.vars.find(head, args, kNoAgent);
    if (v < 0 && author != kNoAgent) v = task.vars.find(head, args, author);
    if (v < 0)
        for (const AgentModel &a : task.agents) {
            v = task.vars.find(head, args, a.id);
            if (v >= 0) break;
        }
    return v;
}

}  // namespace

PartialPlan parse_plan(const std::string &text, const MapTask &task) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "plan v1") throw PlanError("bad plan header");
    PartialPlan plan;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "step") {
            StepId id;
            std::string author, action_name;
            ls >> id >> author;
            std::getline(ls, action_name);
            if (!action_name.empty() && action_name[0] == ' ') action_name.erase(0, 1);
            auto it = task.action_index.find(action_name);
            if (it == task.action_index.end())
                throw PlanError("unknown action in plan file: " + action_name);
            const GroundAction &ga = task.action(it->second);
            AgentId author_id = author == "-" ? kNoAgent : task.agent_by_name(author);
            StepId got = plan.add_step({id, ga.id, ga.name, ga.owners, author_id, ga.pre, ga.eff,
                                        ga.fictitious()});
            if (got != id) throw PlanError("plan file steps must be listed in id order");
            if (id == kGoalStep) plan.add_ordering(kInitStep, kGoalStep);
        } else if (kind == "ordering") {
            StepId a, b;
            ls >> a >> b;
            if (!(a == kInitStep && b == kGoalStep)) plan.add_ordering(a, b);
        } else if (kind == "link") {
            StepId p, c;
            std::string pol, author;
            ls >> p >> c >> pol >> author;
            std::string rest;
            std::getline(ls, rest);
            size_t close = rest.find(')');
            if (close == std::string::npos) throw PlanError("bad link fluent");
            std::string term = rest.substr(1, close);
            std::string value = rest.substr(close + 1);
            value.erase(0, value.find_first_not_of(' '));
            AgentId author_id = author == "-" ? kNoAgent : task.agent_by_name(author);
            VarId v = parse_var(term, task, author_id);
            ObjectId d = task.objects.find(value);
            if (v < 0 || d < 0) throw PlanError("bad link fluent: " + rest);
            plan.add_link({p, c, {v, d, pol == "pos"}, author_id});
        } else {
            throw PlanError("unknown record in plan file: " + kind);
        }
    }
    return plan;
}

std::string plan_to_dot(const PartialPlan &plan, const MapTask &task) {
    static const char *shapes[] = {"box", "ellipse", "hexagon", "diamond", "octagon", "trapezium"};
    // Node ids are the action names when unique (matching the paper figures);
    // repeated names get a #id suffix.
    std::map<std::string, int> name_count;
    for (const PlanStep &s : plan.steps()) ++name_count[s.name];
    auto node = [&](const PlanStep &s) {
        std::string id = s.name;
        if (name_count[s.name] > 1) id += " #" + std::to_string(s.id);
        return s.fictitious && name_count[s.name] == 1 ? id : "\"" + id + "\"";
    };

    std::ostringstream os;
    os << "digraph plan {\n  rankdir=LR;\n";
    for (const PlanStep &s : plan.steps()) {
        std::string shape = "plaintext";
        if (!s.fictitious && !s.owners.empty())
            shape = shapes[static_cast<size_t>(s.owners.front()) % 6];
        os << "  " << node(s) << " [shape=" << shape << "];\n";
    }
    for (const CausalLink &l : plan.links()) {
        const VariableInfo &v = task.vars.info(l.fluent.var);
        std::string label = v.display;
        label += l.fluent.positive ? "=" : "!=";
        label += task.objects.name(l.fluent.value);
        os << "  " << node(plan.step(l.producer)) << " -> " << node(plan.step(l.consumer))
           << " [label=\"" << label << "\"];\n";
    }
    for (const auto &[a, b] : plan.orderings()) {
        bool redundant = a == kInitStep || b == kGoalStep;
        for (const CausalLink &l : plan.links())
            if (l.producer == a && l.consumer == b) redundant = true;
        if (!redundant)
            os << "  " << node(plan.step(a)) << " -> " << node(plan.step(b))
               << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace mapop
