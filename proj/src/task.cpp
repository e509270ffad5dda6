#include "mapop/task.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mapop {

ObjectId ObjectTable::intern(const std::string &name) {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    ObjectId id = static_cast<ObjectId>(names.size());
    names.push_back(name);
    by_name.emplace(name, id);
    return id;
}

ObjectId ObjectTable::find(const std::string &name) const {
    auto it = by_name.find(name);
    return it == by_name.end() ? -1 : it->second;
}

VarId VariableTable::intern(VariableInfo info) {
    auto key = std::make_tuple(info.head, info.args, info.scope);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    VarId id = static_cast<VarId>(vars.size());
    index.emplace(std::move(key), id);
    vars.push_back(std::move(info));
    return id;
}

VarId VariableTable::find(const std::string &head, const std::vector<ObjectId> &args,
                          AgentId scope) const {
    auto it = index.find(std::make_tuple(head, args, scope));
    return it == index.end() ? -1 : it->second;
}

bool AgentModel::is_subtype(const std::string &t, const std::string &u) const {
    if (u == "object" || t == u) return true;
    std::string cur = t;
    std::set<std::string> seen;
    while (true) {
        auto it = type_parent.find(cur);
        if (it == type_parent.end()) return false;
        cur = it->second;
        if (cur == u) return true;
        if (!seen.insert(cur).second) return false;
    }
}

bool AgentModel::object_is(ObjectId o, const std::vector<std::string> &allowed) const {
    auto it = object_type.find(o);
    if (it == object_type.end()) return false;
    return std::any_of(allowed.begin(), allowed.end(),
                       [&](const std::string &u) { return is_subtype(it->second, u); });
}

bool AgentModel::sees_value(VarId v, ObjectId d) const {
    auto it = domains.find(v);
    if (it == domains.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), d);
}

AgentId MapTask::agent_by_name(const std::string &name) const {
    for (const AgentModel &a : agents)
        if (a.name == name) return a.id;
    return kNoAgent;
}

int MapTask::visible_agent_count(VarId v) const {
    int n = 0;
    for (const AgentModel &a : agents)
        if (a.sees_var(v)) ++n;
    return n;
}

bool MapTask::strictly_private(AgentId i, const Fluent &f) const {
    for (const AgentModel &a : agents)
        if (a.id != i && a.sees(f)) return false;
    return true;
}

std::string MapTask::fluent_name(const Fluent &f) const {
    std::ostringstream os;
    const VariableInfo &v = vars.info(f.var);
    os << v.display << (f.positive ? " = " : " != ") << objects.name(f.value);
    return os.str();
}

std::string MapTask::qualified_action_name(ActionId a) const {
    const GroundAction &ga = action(a);
    if (ga.fictitious()) return ga.name;
    return agent(ga.owners.front()).name + "/" + ga.name;
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

struct DeclTables {
    std::map<std::string, const PredicateDecl *> predicates;
    std::map<std::string, const FunctionDecl *> functions;
    std::map<std::string, const FunctionDecl *> multi_functions;

    explicit DeclTables(const DomainModel &d) {
        for (const auto &p : d.predicates) predicates[p.name] = &p;
        for (const auto &f : d.functions) functions[f.name] = &f;
        for (const auto &f : d.multi_functions) multi_functions[f.name] = &f;
    }
};

class Grounder {
public:
    Grounder(const std::vector<ValidatedAgentInput> &inputs, std::vector<Diagnostic> &diags)
        : inputs_(inputs), diags_(diags) {}

    std::optional<MapTask> run() {
        task_.objects.intern("true");
        task_.objects.intern("false");

        for (const auto &input : inputs_)
            for (const auto &p : input.problem.shared_data) shared_heads_.insert(p.head);

        for (size_t i = 0; i < inputs_.size(); ++i) {
            const auto &input = inputs_[i];
            AgentModel agent;
            agent.id = static_cast<AgentId>(i);
            agent.name = input.problem.name;
            for (const AgentModel &other : task_.agents)
                if (other.name == agent.name)
                    error({1, 1}, input.problem_file,
                          "duplicate agent name '" + agent.name + "' across problem files");
            agent.type_parent = input.domain.type_hierarchy;
            for (const auto &o : input.problem.objects) {
                ObjectId id = task_.objects.intern(o.name);
                agent.object_type[id] = o.types.empty() ? "object" : o.types[0];
                agent.declared_objects.push_back(id);
            }
            task_.agents.push_back(std::move(agent));
        }
        // Reserve the fictitious actions; their content is filled at the end.
        task_.actions.resize(2);

        for (size_t i = 0; i < inputs_.size(); ++i) ground_agent(static_cast<AgentId>(i));
        if (has_errors(diags_)) return std::nullopt;

        resolve_recipients();
        if (!build_fictitious()) return std::nullopt;
        index_actions();
        if (has_errors(diags_)) return std::nullopt;
        return std::move(task_);
    }

private:
    void error(SourceLoc loc, const std::string &file, const std::string &msg) {
        diags_.push_back({Severity::Error, loc, file, msg});
    }

    AgentId scope_of(const std::string &head) const {
        return shared_heads_.count(head) ? kNoAgent : current_;
    }

    std::string display_name(const std::string &head, const std::vector<ObjectId> &args) const {
        std::ostringstream os;
        os << '(' << head;
        for (ObjectId a : args) os << ' ' << task_.objects.name(a);
        os << ')';
        return os.str();
    }

    VarId intern_var(const std::string &head, std::vector<ObjectId> args, bool boolean) {
        VariableInfo info;
        info.head = head;
        info.scope = scope_of(head);
        info.display = display_name(head, args);
        info.args = std::move(args);
        info.boolean = boolean;
        return task_.vars.intern(std::move(info));
    }

    // Enumerates all assignments of agent objects to the typed parameter list.
    void enumerate(const AgentModel &agent, const std::vector<TypedName> &params,
                   const std::function<void(const std::vector<ObjectId> &)> &fn) {
        std::vector<ObjectId> tuple(params.size(), -1);
        std::function<void(size_t)> rec = [&](size_t k) {
            if (k == params.size()) {
                fn(tuple);
                return;
            }
            for (ObjectId o : agent.declared_objects) {
                if (!agent.object_is(o, params[k].types)) continue;
                tuple[k] = o;
                rec(k + 1);
            }
        };
        rec(0);
    }

    void ground_agent(AgentId id) {
        current_ = id;
        const auto &input = inputs_[static_cast<size_t>(id)];
        AgentModel &agent = task_.agents[static_cast<size_t>(id)];
        DeclTables decls(input.domain);
        const std::string &pfile = input.problem_file;

        // Variables and per-agent domains.
        for (const auto &p : input.domain.predicates) {
            enumerate(agent, p.params, [&](const std::vector<ObjectId> &args) {
                VarId v = intern_var(p.name, args, true);
                agent.variables.insert(v);
                agent.domains[v] = {ObjectTable::kTrue, ObjectTable::kFalse};
            });
        }
        for (const auto &f : input.domain.functions) {
            std::vector<ObjectId> dom;
            for (ObjectId o : agent.declared_objects)
                if (agent.object_is(o, f.result_types)) dom.push_back(o);
            std::sort(dom.begin(), dom.end());
            enumerate(agent, f.params, [&](const std::vector<ObjectId> &args) {
                VarId v = intern_var(f.name, args, false);
                agent.variables.insert(v);
                agent.domains[v] = dom;
            });
        }
        for (const auto &f : input.domain.multi_functions) {
            enumerate(agent, f.params, [&](const std::vector<ObjectId> &args) {
                for (ObjectId member : agent.declared_objects) {
                    if (!agent.object_is(member, f.result_types)) continue;
                    std::vector<ObjectId> full = args;
                    full.push_back(member);
                    VarId v = intern_var(f.name, std::move(full), true);
                    agent.variables.insert(v);
                    agent.domains[v] = {ObjectTable::kTrue, ObjectTable::kFalse};
                }
            });
        }

        // Initial state.
        std::vector<Fluent> init;
        auto add_init = [&](Fluent f, SourceLoc loc) {
            for (const Fluent &g : init) {
                if (g.var != f.var) continue;
                bool clash = (g.positive && f.positive && g.value != f.value) ||
                             (g.positive != f.positive && g.value == f.value);
                if (clash)
                    error(loc, pfile, "inconsistent init: " + task_.fluent_name(g) + " vs " +
                                          task_.fluent_name(f));
            }
            init.push_back(f);
        };
        for (const auto &lit : input.problem.init) {
            VarId v = -1;
            Fluent f;
            switch (lit.kind) {
            case InitLiteral::Kind::Predicate: {
                v = task_.vars.find(lit.head, object_ids(lit.args), scope_of(lit.head));
                if (v < 0) {
                    error(lit.loc, pfile, "init literal on an unknown variable");
                    continue;
                }
                f = {v, lit.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true};
                add_init(f, lit.loc);
                break;
            }
            case InitLiteral::Kind::FunctionEq: {
                v = task_.vars.find(lit.head, object_ids(lit.args), scope_of(lit.head));
                ObjectId val = task_.objects.find(lit.value);
                if (v < 0 || val < 0 || !agent.sees_value(v, val)) {
                    error(lit.loc, pfile, "init literal on an unknown variable or value");
                    continue;
                }
                f = {v, val, !lit.negated};
                add_init(f, lit.loc);
                break;
            }
            case InitLiteral::Kind::MultiEq: {
                for (const std::string &member : lit.value_set) {
                    ObjectId mo = task_.objects.find(member);
                    std::vector<ObjectId> full = object_ids(lit.args);
                    full.push_back(mo);
                    v = task_.vars.find(lit.head, full, scope_of(lit.head));
                    if (v < 0) {
                        error(lit.loc, pfile, "init literal on an unknown variable");
                        continue;
                    }
                    f = {v, lit.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true};
                    add_init(f, lit.loc);
                }
                break;
            }
            }
        }
        std::sort(init.begin(), init.end());
        init.erase(std::unique(init.begin(), init.end()), init.end());
        agent.init = std::move(init);

        // Goals.
        if (input.problem.global_goal.disjunctive)
            error({1, 1}, pfile, "disjunctive global goals cannot be grounded (goals form PRE of the final action)");
        std::vector<Fluent> goals = goal_fluents(input.problem.global_goal, agent, pfile);
        std::sort(goals.begin(), goals.end());
        if (task_.goals.empty() && current_ == 0) {
            task_.goals = goals;
        } else if (goals != task_.goals) {
            error({1, 1}, pfile, "global goal differs from the other agents' global goal");
        }
        if (input.problem.private_goal) {
            agent.private_goals = goal_fluents(*input.problem.private_goal, agent, pfile);
            std::sort(agent.private_goals.begin(), agent.private_goals.end());
        }

        // Share patterns.
        for (const auto &sp : input.problem.shared_data) {
            CompiledPattern cp;
            cp.head = sp.head;
            for (const auto &p : sp.params) cp.param_types.push_back(p.types);
            cp.value_types = sp.value_types;
            cp.all_agents = sp.all_agents;
            cp.recipient_names = sp.recipients;
            agent.share_patterns.push_back(std::move(cp));
        }

        // Ground actions.
        std::set<std::string> affected;
        for (const auto &schema : input.domain.action_schemas)
            for (const auto &e : schema.effects) affected.insert(e.head);

        for (const auto &schema : input.domain.action_schemas) {
            enumerate(agent, schema.params, [&](const std::vector<ObjectId> &binding) {
                ground_action(agent, schema, binding, affected, pfile);
            });
        }
    }

    std::vector<ObjectId> object_ids(const std::vector<std::string> &names) {
        std::vector<ObjectId> out;
        out.reserve(names.size());
        for (const auto &n : names) out.push_back(task_.objects.find(n));
        return out;
    }

    std::vector<Fluent> goal_fluents(const GoalFormula &g, const AgentModel &agent,
                                     const std::string &pfile) {
        std::vector<Fluent> out;
        for (const Atom &a : g.atoms) {
            std::vector<ObjectId> args = object_ids(a.args);
            if (a.kind == Atom::Kind::Predicate) {
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                if (v < 0) {
                    error(a.loc, pfile, "goal on an unknown variable");
                    continue;
                }
                out.push_back({v, a.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true});
            } else if (a.kind == Atom::Kind::Member) {
                args.push_back(task_.objects.find(a.value));
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                if (v < 0) {
                    error(a.loc, pfile, "goal on an unknown variable");
                    continue;
                }
                out.push_back({v, a.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true});
            } else {
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                ObjectId val = task_.objects.find(a.value);
                if (v < 0 || val < 0 || !agent.sees_value(v, val)) {
                    error(a.loc, pfile, "goal on an unknown variable or value");
                    continue;
                }
                out.push_back({v, val, !a.negated});
            }
        }
        return out;
    }

    void ground_action(AgentModel &agent, const ActionSchema &schema,
                       const std::vector<ObjectId> &binding, const std::set<std::string> &affected,
                       const std::string &pfile) {
        std::map<std::string, ObjectId> env;
        for (size_t k = 0; k < schema.params.size(); ++k) env[schema.params[k].name] = binding[k];
        auto resolve = [&](const std::string &name, SourceLoc loc) -> ObjectId {
            if (!name.empty() && name[0] == '?') {
                auto it = env.find(name);
                if (it != env.end()) return it->second;
                error(loc, pfile, "unbound parameter " + name + " in action " + schema.name);
                return -1;
            }
            ObjectId o = task_.objects.find(name);
            if (o < 0 || !agent.object_type.count(o))
                error(loc, pfile, "unknown constant '" + name + "' in action " + schema.name);
            return o;
        };

        GroundAction ga;
        std::vector<Fluent> pre;
        for (const Atom &a : schema.preconditions) {
            std::vector<ObjectId> args;
            for (const auto &arg : a.args) args.push_back(resolve(arg, a.loc));
            Fluent f;
            if (a.kind == Atom::Kind::Predicate) {
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                if (v < 0) return;  // untypable grounding
                f = {v, a.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true};
            } else if (a.kind == Atom::Kind::Member) {
                args.push_back(resolve(a.value, a.loc));
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                if (v < 0) return;
                f = {v, a.negated ? ObjectTable::kFalse : ObjectTable::kTrue, true};
            } else {
                VarId v = task_.vars.find(a.head, args, scope_of(a.head));
                ObjectId val = resolve(a.value, a.loc);
                if (v < 0 || val < 0) return;
                if (!agent.sees_value(v, val)) return;  // value outside the variable's domain
                f = {v, val, !a.negated};
            }
            pre.push_back(f);
        }

        std::vector<EffectOp> eff;
        for (const EffectExpr &e : schema.effects) {
            std::vector<ObjectId> args;
            for (const auto &arg : e.args) args.push_back(resolve(arg, e.loc));
            VarId v = task_.vars.find(e.head, args, scope_of(e.head));
            if (v < 0) return;
            EffectOp op;
            switch (e.kind) {
            case EffectExpr::Kind::PredicateSet:
                op = {v, e.positive ? ObjectTable::kTrue : ObjectTable::kFalse, true};
                break;
            case EffectExpr::Kind::Assign: {
                ObjectId val = resolve(e.value, e.loc);
                if (val < 0 || !agent.sees_value(v, val)) return;
                op = {v, val, true};
                break;
            }
            case EffectExpr::Kind::Deny: {
                ObjectId val = resolve(e.value, e.loc);
                if (val < 0 || !agent.sees_value(v, val)) return;
                op = {v, val, false};
                break;
            }
            }
            eff.push_back(op);
        }

        // Self-contradictory groundings (two different assigns to one
        // variable, e.g. pass ?a ?a) are dropped.
        std::sort(eff.begin(), eff.end());
        eff.erase(std::unique(eff.begin(), eff.end()), eff.end());
        std::map<VarId, ObjectId> assigned;
        for (const EffectOp &op : eff) {
            if (!op.assign) continue;
            auto [it, fresh] = assigned.emplace(op.var, op.value);
            if (!fresh && it->second != op.value) return;
        }
        for (const EffectOp &op : eff)
            if (!op.assign && assigned.count(op.var) && assigned[op.var] == op.value)
                return;  // assign(v,d) together with deny(v,d)

        // Static pruning: a precondition on a variable this agent never
        // affects must already hold in its initial state.
        for (const Fluent &f : pre) {
            if (affected.count(task_.vars.info(f.var).head)) continue;
            bool holds = false;
            for (const Fluent &g : agent.init) {
                if (g.var != f.var) continue;
                if (g == f) holds = true;
                if (!f.positive && g.positive && g.value != f.value) holds = true;
            }
            if (!holds) return;
        }

        std::sort(pre.begin(), pre.end());
        pre.erase(std::unique(pre.begin(), pre.end()), pre.end());

        ga.id = static_cast<ActionId>(task_.actions.size());
        std::ostringstream name;
        name << schema.name;
        for (ObjectId o : binding) name << ' ' << task_.objects.name(o);
        ga.name = name.str();
        ga.pre = std::move(pre);
        ga.eff = std::move(eff);
        ga.owners = {agent.id};
        agent.actions.push_back(ga.id);
        task_.actions.push_back(std::move(ga));
    }

    void resolve_recipients() {
        for (AgentModel &agent : task_.agents) {
            for (CompiledPattern &cp : agent.share_patterns) {
                for (const std::string &n : cp.recipient_names) {
                    AgentId id = task_.agent_by_name(n);
                    if (id != kNoAgent) cp.recipients.push_back(id);
                }
                std::sort(cp.recipients.begin(), cp.recipients.end());
            }
        }
    }

    bool build_fictitious() {
        // EFF(a0) is the union of the agents' initial states; Def. 1 requires
        // this union to be consistent.
        std::vector<std::pair<Fluent, AgentId>> merged;
        for (const AgentModel &agent : task_.agents)
            for (const Fluent &f : agent.init) merged.push_back({f, agent.id});
        bool ok = true;
        for (size_t i = 0; i < merged.size(); ++i) {
            for (size_t j = i + 1; j < merged.size(); ++j) {
                const Fluent &a = merged[i].first;
                const Fluent &b = merged[j].first;
                if (a.var != b.var) continue;
                bool clash = (a.positive && b.positive && a.value != b.value) ||
                             (a.positive != b.positive && a.value == b.value);
                if (clash) {
                    error({0, 0}, "<task>",
                          "agents " + task_.agent(merged[i].second).name + " and " +
                              task_.agent(merged[j].second).name +
                              " hold contradictory initial fluents: " + task_.fluent_name(a) +
                              " vs " + task_.fluent_name(b));
                    ok = false;
                }
            }
        }
        if (!ok) return false;

        std::set<Fluent> union_init;
        for (const auto &[f, who] : merged) union_init.insert(f);
        std::set<VarId> has_assign;
        std::vector<EffectOp> eff;
        for (const Fluent &f : union_init)
            if (f.positive) {
                eff.push_back({f.var, f.value, true});
                has_assign.insert(f.var);
            }
        for (const Fluent &f : union_init)
            if (!f.positive && !has_assign.count(f.var)) eff.push_back({f.var, f.value, false});
        std::sort(eff.begin(), eff.end());

        GroundAction init_action;
        init_action.id = kInitAction;
        init_action.name = "Init";
        init_action.eff = std::move(eff);
        task_.actions[0] = std::move(init_action);

        GroundAction goal_action;
        goal_action.id = kGoalAction;
        goal_action.name = "Goal";
        goal_action.pre = task_.goals;
        task_.actions[1] = std::move(goal_action);
        return true;
    }

    void index_actions() {
        task_.action_index["Init"] = kInitAction;
        task_.action_index["Goal"] = kGoalAction;
        for (const GroundAction &a : task_.actions) {
            if (a.fictitious()) continue;
            std::string key = task_.qualified_action_name(a.id);
            if (!task_.action_index.emplace(key, a.id).second)
                error({0, 0}, "<task>", "duplicate ground action " + key);
        }
    }

    const std::vector<ValidatedAgentInput> &inputs_;
    std::vector<Diagnostic> &diags_;
    MapTask task_;
    std::set<std::string> shared_heads_;
    AgentId current_ = kNoAgent;
};

}  // namespace

std::optional<MapTask> ground_task(const std::vector<ValidatedAgentInput> &inputs,
                                   std::vector<Diagnostic> &diags) {
    if (inputs.empty()) {
        diags.push_back({Severity::Error, {0, 0}, "<task>", "at least one agent input is required"});
        return std::nullopt;
    }
    return Grounder(inputs, diags).run();
}

// ---------------------------------------------------------------------------
// State-set operations

std::vector<Fluent> negative_closure(const std::vector<Fluent> &state, const AgentModel &agent) {
    std::set<Fluent> out(state.begin(), state.end());
    for (const Fluent &f : state) {
        if (!f.positive) continue;
        auto it = agent.domains.find(f.var);
        if (it == agent.domains.end()) continue;
        for (ObjectId d : it->second)
            if (d != f.value) out.insert({f.var, d, false});
    }
    for (const Fluent &f : out) {
        if (!f.positive && out.count({f.var, f.value, true}))
            throw StateError("inconsistent state: variable both takes and does not take a value");
        if (f.positive)
            for (const Fluent &g : out)
                if (g.positive && g.var == f.var && g.value != f.value)
                    throw StateError("inconsistent state: variable takes two values");
    }
    return {out.begin(), out.end()};
}

bool holds_in(const std::vector<Fluent> &closed_state, const Fluent &f) {
    return std::binary_search(closed_state.begin(), closed_state.end(), f);
}

std::vector<Fluent> apply_effects(const std::vector<Fluent> &state, const GroundAction &action,
                                  const AgentModel &agent) {
    std::vector<Fluent> closed = negative_closure(state, agent);
    for (const Fluent &p : action.pre)
        if (!holds_in(closed, p))
            throw StateError("precondition violated: action " + action.name);

    std::set<Fluent> out(closed.begin(), closed.end());
    for (const EffectOp &op : action.eff) {
        if (op.assign) {
            for (auto it = out.begin(); it != out.end();) {
                if (it->var == op.var)
                    it = out.erase(it);
                else
                    ++it;
            }
            out.insert({op.var, op.value, true});
            auto dom = agent.domains.find(op.var);
            if (dom != agent.domains.end())
                for (ObjectId d : dom->second)
                    if (d != op.value) out.insert({op.var, d, false});
        } else {
            out.erase({op.var, op.value, true});
            out.insert({op.var, op.value, false});
        }
    }
    return {out.begin(), out.end()};
}

bool is_shareable(const Fluent &f, const AgentModel &from, AgentId to, const MapTask &task) {
    if (to == from.id) return true;
    const VariableInfo &v = task.vars.info(f.var);
    if (v.scope != kNoAgent) return false;
    for (const CompiledPattern &p : from.share_patterns) {
        if (p.head != v.head) continue;
        if (!p.all_agents &&
            !std::binary_search(p.recipients.begin(), p.recipients.end(), to))
            continue;
        if (p.value_types.empty()) {
            // Predicate pattern: arguments must type-check, value is boolean.
            if (v.args.size() != p.param_types.size()) continue;
            bool ok = true;
            for (size_t k = 0; k < v.args.size() && ok; ++k)
                ok = from.object_is(v.args[k], p.param_types[k]);
            if (ok && (f.value == ObjectTable::kTrue || f.value == ObjectTable::kFalse)) return true;
        } else if (v.boolean) {
            // Multi-function pattern: last variable argument is the member value.
            if (v.args.size() != p.param_types.size() + 1) continue;
            bool ok = true;
            for (size_t k = 0; k + 1 < v.args.size() && ok; ++k)
                ok = from.object_is(v.args[k], p.param_types[k]);
            if (ok && from.object_is(v.args.back(), p.value_types)) return true;
        } else {
            if (v.args.size() != p.param_types.size()) continue;
            bool ok = true;
            for (size_t k = 0; k < v.args.size() && ok; ++k)
                ok = from.object_is(v.args[k], p.param_types[k]);
            if (ok && from.object_is(f.value, p.value_types)) return true;
        }
    }
    return false;
}

std::string dump_model(const MapTask &task) {
    std::ostringstream os;
    for (const AgentModel &agent : task.agents) {
        os << "agent " << agent.id << ' ' << agent.name << '\n';
        for (VarId v : agent.variables) {
            os << "  var " << task.vars.info(v).display << " :";
            for (ObjectId d : agent.domains.at(v)) os << ' ' << task.objects.name(d);
            os << '\n';
        }
        for (const Fluent &f : agent.init) os << "  init " << task.fluent_name(f) << '\n';
        for (ActionId a : agent.actions) {
            const GroundAction &ga = task.action(a);
            os << "  action " << ga.name << '\n';
            for (const Fluent &p : ga.pre) os << "    pre " << task.fluent_name(p) << '\n';
            for (const EffectOp &e : ga.eff)
                os << "    eff " << task.vars.info(e.var).display << (e.assign ? " := " : " drop ")
                   << task.objects.name(e.value) << '\n';
        }
    }
    return os.str();
}

}  // namespace mapop
