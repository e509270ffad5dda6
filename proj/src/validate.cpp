#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mapop/parser.hpp"

namespace mapop {
namespace {

// Declaration lookup shared by validation and grounding.
struct DeclIndex {
    std::map<std::string, const PredicateDecl *> predicates;
    std::map<std::string, const FunctionDecl *> functions;
    std::map<std::string, const FunctionDecl *> multi_functions;

    explicit DeclIndex(const DomainModel &d) {
        for (const auto &p : d.predicates) predicates[p.name] = &p;
        for (const auto &f : d.functions) functions[f.name] = &f;
        for (const auto &f : d.multi_functions) multi_functions[f.name] = &f;
    }
};

class Validator {
public:
    Validator(const DomainModel &d, const ProblemModel &p, const std::string &pfile,
              std::vector<Diagnostic> &diags)
        : domain_(d), problem_(p), file_(pfile), diags_(diags), decls_(d) {
        for (const auto &o : p.objects) {
            if (object_type_.count(o.name))
                error(o.loc, "object " + o.name + " declared twice");
            object_type_[o.name] = o.types.empty() ? "object" : o.types[0];
        }
    }

    void run() {
        if (problem_.domain_name != domain_.name)
            error({1, 1}, "problem references domain '" + problem_.domain_name +
                              "' but the paired domain is '" + domain_.name + "'");
        for (const auto &lit : problem_.init) init_literal(lit);
        goal(problem_.global_goal);
        if (problem_.private_goal) goal(*problem_.private_goal);
        for (const auto &sp : problem_.shared_data) share_pattern(sp);
    }

private:
    bool is_subtype(const std::string &t, const std::string &u) const {
        if (u == "object" || t == u) return true;
        std::string cur = t;
        std::set<std::string> seen;
        while (true) {
            auto it = domain_.type_hierarchy.find(cur);
            if (it == domain_.type_hierarchy.end()) return false;
            cur = it->second;
            if (cur == u) return true;
            if (!seen.insert(cur).second) return false;  // hierarchy cycle
        }
    }

    bool fits(const std::string &type, const std::vector<std::string> &allowed) const {
        return std::any_of(allowed.begin(), allowed.end(),
                           [&](const std::string &u) { return is_subtype(type, u); });
    }

    // Checks an object argument against the declared parameter types.
    void check_object(const std::string &name, const std::vector<std::string> &allowed,
                      SourceLoc loc, const std::string &what) {
        auto it = object_type_.find(name);
        if (it == object_type_.end()) {
            error(loc, "undeclared object '" + name + "' in " + what);
            return;
        }
        if (!fits(it->second, allowed)) {
            std::ostringstream ss;
            ss << "type mismatch in " << what << ": object '" << name << "' has type '"
               << it->second << "' but '";
            for (size_t i = 0; i < allowed.size(); ++i) ss << (i ? " / " : "") << allowed[i];
            ss << "' is required";
            error(loc, ss.str());
        }
    }

    void check_args(const std::vector<std::string> &args, const std::vector<TypedName> &params,
                    SourceLoc loc, const std::string &what) {
        if (args.size() != params.size()) {
            error(loc, "arity mismatch in " + what + ": got " + std::to_string(args.size()) +
                           " arguments, expected " + std::to_string(params.size()));
            return;
        }
        for (size_t i = 0; i < args.size(); ++i)
            check_object(args[i], params[i].types, loc, what);
    }

    void init_literal(const InitLiteral &lit) {
        switch (lit.kind) {
        case InitLiteral::Kind::Predicate: {
            auto it = decls_.predicates.find(lit.head);
            if (it == decls_.predicates.end()) {
                error(lit.loc, "init literal references unknown predicate '" + lit.head + "'");
                return;
            }
            check_args(lit.args, it->second->params, lit.loc, "init literal (" + lit.head + ")");
            break;
        }
        case InitLiteral::Kind::FunctionEq: {
            auto it = decls_.functions.find(lit.head);
            if (it == decls_.functions.end()) {
                if (decls_.multi_functions.count(lit.head))
                    error(lit.loc, "multi-function '" + lit.head +
                                       "' requires a brace-delimited object set in init");
                else
                    error(lit.loc, "init literal references unknown function '" + lit.head + "'");
                return;
            }
            check_args(lit.args, it->second->params, lit.loc, "init literal (" + lit.head + ")");
            check_object(lit.value, it->second->result_types, lit.loc,
                         "init literal (" + lit.head + ")");
            break;
        }
        case InitLiteral::Kind::MultiEq: {
            auto it = decls_.multi_functions.find(lit.head);
            if (it == decls_.multi_functions.end()) {
                error(lit.loc, "init literal references unknown multi-function '" + lit.head + "'");
                return;
            }
            check_args(lit.args, it->second->params, lit.loc, "init literal (" + lit.head + ")");
            for (const std::string &v : lit.value_set)
                check_object(v, it->second->result_types, lit.loc,
                             "init literal (" + lit.head + ")");
            break;
        }
        }
    }

    void goal(const GoalFormula &g) {
        for (const Atom &a : g.atoms) {
            if (a.kind == Atom::Kind::Predicate) {
                auto it = decls_.predicates.find(a.head);
                if (it == decls_.predicates.end()) {
                    error(a.loc, "goal references unknown predicate '" + a.head + "'");
                    continue;
                }
                check_args(a.args, it->second->params, a.loc, "goal atom (" + a.head + ")");
            } else if (a.kind == Atom::Kind::FunctionEq) {
                auto it = decls_.functions.find(a.head);
                if (it == decls_.functions.end()) {
                    error(a.loc, "goal references unknown function '" + a.head + "'");
                    continue;
                }
                check_args(a.args, it->second->params, a.loc, "goal atom (" + a.head + ")");
                check_object(a.value, it->second->result_types, a.loc, "goal atom (" + a.head + ")");
            } else {
                auto it = decls_.multi_functions.find(a.head);
                if (it == decls_.multi_functions.end()) {
                    error(a.loc, "goal references unknown multi-function '" + a.head + "'");
                    continue;
                }
                check_args(a.args, it->second->params, a.loc, "goal atom (" + a.head + ")");
                check_object(a.value, it->second->result_types, a.loc, "goal atom (" + a.head + ")");
            }
        }
    }

    void share_pattern(const SharePattern &sp) {
        const std::vector<TypedName> *params = nullptr;
        if (sp.value_types.empty()) {
            auto it = decls_.predicates.find(sp.head);
            if (it == decls_.predicates.end()) {
                error(sp.loc, "share pattern (" + sp.head +
                                  ") matches no declared predicate");
                return;
            }
            params = &it->second->params;
        } else {
            auto it = decls_.functions.find(sp.head);
            auto mt = decls_.multi_functions.find(sp.head);
            if (it == decls_.functions.end() && mt == decls_.multi_functions.end()) {
                error(sp.loc, "share pattern (" + sp.head +
                                  ") matches no declared function or multi-function");
                return;
            }
            params = it != decls_.functions.end() ? &it->second->params : &mt->second->params;
        }
        if (sp.params.size() != params->size())
            error(sp.loc, "share pattern (" + sp.head + ") has arity " +
                              std::to_string(sp.params.size()) + ", declaration has " +
                              std::to_string(params->size()));
        for (const std::string &r : sp.recipients) {
            auto it = object_type_.find(r);
            if (it == object_type_.end())
                error(sp.loc, "share pattern recipient '" + r + "' is not a declared object");
            else if (!is_subtype(it->second, "agent"))
                error(sp.loc, "share pattern recipient '" + r + "' is not of type agent");
        }
    }

    void error(SourceLoc loc, const std::string &msg) {
        diags_.push_back({Severity::Error, loc, file_, msg});
    }

    const DomainModel &domain_;
    const ProblemModel &problem_;
    std::string file_;
    std::vector<Diagnostic> &diags_;
    DeclIndex decls_;
    std::map<std::string, std::string> object_type_;
};

}  // namespace

ParseResult<ValidatedAgentInput> validate_pair(const DomainModel &domain, const ProblemModel &problem,
                                               const std::string &domain_file,
                                               const std::string &problem_file) {
    ParseResult<ValidatedAgentInput> r;
    Validator v(domain, problem, problem_file, r.diags);
    v.run();
    if (!has_errors(r.diags))
        r.value = ValidatedAgentInput{domain, problem, domain_file, problem_file};
    return r;
}

// ---------------------------------------------------------------------------
// Canonical pretty-printing.

namespace {

void print_types(std::ostream &os, const std::vector<std::string> &types) {
    if (types.size() == 1) {
        os << types[0];
        return;
    }
    os << "(either";
    for (const auto &t : types) os << ' ' << t;
    os << ')';
}

void print_typed_list(std::ostream &os, const std::vector<TypedName> &list) {
    for (size_t i = 0; i < list.size(); ++i) {
        if (i) os << ' ';
        os << list[i].name;
        bool last_of_group =
            i + 1 == list.size() || list[i + 1].types != list[i].types;
        if (last_of_group) {
            os << " - ";
            print_types(os, list[i].types);
        }
    }
}

void print_signature(std::ostream &os, const std::string &head, const std::vector<TypedName> &params) {
    os << '(' << head;
    if (!params.empty()) {
        os << ' ';
        print_typed_list(os, params);
    }
    os << ')';
}

void print_atom(std::ostream &os, const Atom &a) {
    if (a.negated) os << "(not ";
    switch (a.kind) {
    case Atom::Kind::Predicate:
        os << '(' << a.head;
        for (const auto &x : a.args) os << ' ' << x;
        os << ')';
        break;
    case Atom::Kind::FunctionEq:
    case Atom::Kind::Member:
        os << (a.kind == Atom::Kind::FunctionEq ? "(= (" : "(member (") << a.head;
        for (const auto &x : a.args) os << ' ' << x;
        os << ") " << a.value << ')';
        break;
    }
    if (a.negated) os << ')';
}

void print_goal(std::ostream &os, const GoalFormula &g) {
    if (g.atoms.size() == 1 && !g.disjunctive) {
        print_atom(os, g.atoms[0]);
        return;
    }
    os << (g.disjunctive ? "(or" : "(and");
    for (const Atom &a : g.atoms) {
        os << ' ';
        print_atom(os, a);
    }
    os << ')';
}

}  // namespace

std::string pretty_print(const DomainModel &m) {
    std::ostringstream os;
    os << "(define (domain " << m.name << ")\n";
    if (!m.requirements.empty()) {
        os << " (:requirements";
        for (const auto &r : m.requirements) os << ' ' << r;
        os << ")\n";
    }
    os << " (:types";
    for (const auto &[child, parent] : m.type_hierarchy) os << ' ' << child << " - " << parent;
    os << ")\n";
    os << " (:predicates";
    for (const auto &p : m.predicates) {
        os << ' ';
        print_signature(os, p.name, p.params);
    }
    os << ")\n";
    for (bool multi : {false, true}) {
        const auto &fns = multi ? m.multi_functions : m.functions;
        if (fns.empty()) continue;
        os << (multi ? " (:multi-functions" : " (:functions");
        for (const auto &f : fns) {
            os << ' ';
            print_signature(os, f.name, f.params);
            os << " - ";
            print_types(os, f.result_types);
        }
        os << ")\n";
    }
    for (const auto &a : m.action_schemas) {
        os << " (:action " << a.name << "\n  :parameters (";
        print_typed_list(os, a.params);
        os << ")\n  :precondition (and";
        for (const auto &c : a.preconditions) {
            os << ' ';
            print_atom(os, c);
        }
        os << ")\n  :effect (and";
        for (const auto &e : a.effects) {
            os << ' ';
            switch (e.kind) {
            case EffectExpr::Kind::Assign:
                os << "(assign (" << e.head;
                for (const auto &x : e.args) os << ' ' << x;
                os << ") " << e.value << ')';
                break;
            case EffectExpr::Kind::Deny:
                os << "(not (= (" << e.head;
                for (const auto &x : e.args) os << ' ' << x;
                os << ") " << e.value << "))";
                break;
            case EffectExpr::Kind::PredicateSet:
                if (!e.positive) os << "(not ";
                os << '(' << e.head;
                for (const auto &x : e.args) os << ' ' << x;
                os << ')';
                if (!e.positive) os << ')';
                break;
            }
        }
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string pretty_print(const ProblemModel &m) {
    std::ostringstream os;
    os << "(define (problem " << m.name << ")\n (:domain " << m.domain_name << ")\n";
    os << " (:objects ";
    print_typed_list(os, m.objects);
    os << ")\n";
    if (!m.shared_data.empty()) {
        os << " (:shared-data";
        for (const auto &sp : m.shared_data) {
            os << "\n  ";
            if (sp.value_types.empty()) {
                print_signature(os, sp.head, sp.params);
            } else {
                os << '(';
                print_signature(os, sp.head, sp.params);
                os << " - ";
                print_types(os, sp.value_types);
                os << ')';
            }
            if (!sp.all_agents) {
                os << " - ";
                if (sp.recipients.size() == 1) {
                    os << sp.recipients[0];
                } else {
                    os << "(either";
                    for (const auto &r : sp.recipients) os << ' ' << r;
                    os << ')';
                }
            }
        }
        os << ")\n";
    }
    os << " (:init";
    for (const auto &lit : m.init) {
        os << "\n  ";
        if (lit.negated) os << "(not ";
        switch (lit.kind) {
        case InitLiteral::Kind::Predicate:
            os << '(' << lit.head;
            for (const auto &x : lit.args) os << ' ' << x;
            os << ')';
            break;
        case InitLiteral::Kind::FunctionEq:
            os << "(= (" << lit.head;
            for (const auto &x : lit.args) os << ' ' << x;
            os << ") " << lit.value << ')';
            break;
        case InitLiteral::Kind::MultiEq:
            os << "(= (" << lit.head;
            for (const auto &x : lit.args) os << ' ' << x;
            os << ") {";
            for (size_t i = 0; i < lit.value_set.size(); ++i)
                os << (i ? " " : "") << lit.value_set[i];
            os << "})";
            break;
        }
        if (lit.negated) os << ')';
    }
    os << ")\n (:global-goal ";
    print_goal(os, m.global_goal);
    os << ")\n";
    if (m.private_goal) {
        os << " (:private-goal ";
        print_goal(os, *m.private_goal);
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

}  // namespace mapop
