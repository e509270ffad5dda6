#include "mapop/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mapop/sexpr.hpp"

namespace mapop {
namespace {

class SectionParser {
public:
    SectionParser(const std::string &file, std::vector<Diagnostic> &diags)
        : file_(file), diags_(diags) {}

protected:
    void error(SourceLoc loc, const std::string &msg) {
        diags_.push_back({Severity::Error, loc, file_, msg});
    }
    void warning(SourceLoc loc, const std::string &msg) {
        diags_.push_back({Severity::Warning, loc, file_, msg});
    }

    // Parses "n1 n2 - T n3 - (either A B) n4" into typed names; names without
    // a trailing type default to object.
    std::vector<TypedName> typed_list(const std::vector<SExpr> &items, size_t begin, size_t end) {
        std::vector<TypedName> out;
        std::vector<size_t> pending;
        for (size_t i = begin; i < end; ++i) {
            const SExpr &e = items[i];
            if (e.is_symbol("-")) {
                if (i + 1 >= end) {
                    error(e.loc, "dangling '-' in typed list");
                    break;
                }
                std::vector<std::string> types = type_spec(items[i + 1]);
                for (size_t p : pending) out[p].types = types;
                pending.clear();
                ++i;
            } else if (e.is_symbol()) {
                pending.push_back(out.size());
                out.push_back({e.text, {"object"}, e.loc});
            } else {
                error(e.loc, "expected a name in typed list");
            }
        }
        return out;
    }

    std::vector<std::string> type_spec(const SExpr &e) {
        if (e.is_symbol()) return {e.text};
        if (e.is_list() && !e.items.empty() && e.items[0].is_symbol("either")) {
            std::vector<std::string> out;
            for (size_t i = 1; i < e.items.size(); ++i) {
                if (e.items[i].is_symbol())
                    out.push_back(e.items[i].text);
                else
                    error(e.items[i].loc, "expected a type name inside (either ...)");
            }
            if (out.empty()) error(e.loc, "(either) requires at least one type");
            return out;
        }
        error(e.loc, "expected a type name or (either ...)");
        return {"object"};
    }

    // (head args...) -> head + argument symbols.
    bool term(const SExpr &e, std::string &head, std::vector<std::string> &args) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
            error(e.loc, "expected (name arg ...)");
            return false;
        }
        head = e.items[0].text;
        for (size_t i = 1; i < e.items.size(); ++i) {
            if (!e.items[i].is_symbol()) {
                error(e.items[i].loc, "expected an argument name");
                return false;
            }
            args.push_back(e.items[i].text);
        }
        return true;
    }

    bool atom(const SExpr &e, Atom &out) {
        out.loc = e.loc;
        if (!e.is_list() || e.items.empty()) {
            error(e.loc, "expected a condition atom");
            return false;
        }
        const SExpr &h = e.items[0];
        if (h.is_symbol("not")) {
            if (e.items.size() != 2) {
                error(e.loc, "(not ...) takes exactly one atom");
                return false;
            }
            if (!atom(e.items[1], out)) return false;
            out.negated = !out.negated;
            out.loc = e.loc;
            return true;
        }
        if (h.is_symbol("=") || h.is_symbol("member")) {
            out.kind = h.is_symbol("=") ? Atom::Kind::FunctionEq : Atom::Kind::Member;
            if (e.items.size() != 3 || !e.items[2].is_symbol()) {
                error(e.loc, "expected (" + h.text + " (fluent args) value)");
                return false;
            }
            out.value = e.items[2].text;
            return term(e.items[1], out.head, out.args);
        }
        out.kind = Atom::Kind::Predicate;
        return term(e, out.head, out.args);
    }

    std::vector<Atom> condition(const SExpr &e) {
        std::vector<Atom> out;
        if (e.is_list() && !e.items.empty() && e.items[0].is_symbol("and")) {
            for (size_t i = 1; i < e.items.size(); ++i) {
                Atom a;
                if (atom(e.items[i], a)) out.push_back(std::move(a));
            }
            return out;
        }
        Atom a;
        if (atom(e, a)) out.push_back(std::move(a));
        return out;
    }

    std::string file_;
    std::vector<Diagnostic> &diags_;
};

const std::set<std::string> kKnownRequirements = {":typing", ":equality", ":fluents", ":strips",
                                                  ":negative-preconditions"};

class DomainParser : public SectionParser {
public:
    using SectionParser::SectionParser;

    std::optional<DomainModel> run(const SExpr &top) {
        if (!top.is_list() || top.items.size() < 2 || !top.items[0].is_symbol("define") ||
            !top.items[1].is_list() || top.items[1].items.size() != 2 ||
            !top.items[1].items[0].is_symbol("domain") || !top.items[1].items[1].is_symbol()) {
            error(top.loc, "expected (define (domain NAME) ...)");
            return std::nullopt;
        }
        DomainModel m;
        m.name = top.items[1].items[1].text;
        for (size_t i = 2; i < top.items.size(); ++i) section(top.items[i], m);
        check_invariants(m);
        return m;
    }

private:
    void section(const SExpr &e, DomainModel &m) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
            error(e.loc, "expected a domain section");
            return;
        }
        const std::string &key = e.items[0].text;
        if (key == ":requirements") {
            for (size_t i = 1; i < e.items.size(); ++i) {
                if (!e.items[i].is_symbol()) continue;
                m.requirements.push_back(e.items[i].text);
                if (!kKnownRequirements.count(e.items[i].text))
                    warning(e.items[i].loc, "unknown requirement flag " + e.items[i].text);
            }
        } else if (key == ":types") {
            for (const TypedName &t : typed_list(e.items, 1, e.items.size())) {
                if (t.types.size() != 1) {
                    error(t.loc, "a type may only declare a single parent");
                    continue;
                }
                m.type_hierarchy[t.name] = t.types[0];
            }
        } else if (key == ":predicates") {
            for (size_t i = 1; i < e.items.size(); ++i) {
                const SExpr &p = e.items[i];
                if (!p.is_list() || p.items.empty() || !p.items[0].is_symbol()) {
                    error(p.loc, "expected a predicate declaration");
                    continue;
                }
                PredicateDecl d;
                d.name = p.items[0].text;
                d.loc = p.loc;
                d.params = typed_list(p.items, 1, p.items.size());
                m.predicates.push_back(std::move(d));
            }
        } else if (key == ":functions" || key == ":multi-functions") {
            function_block(e, key == ":multi-functions", m);
        } else if (key == ":action") {
            action(e, m);
        } else {
            error(e.loc, "unknown section keyword " + key);
        }
    }

    void function_block(const SExpr &e, bool multi, DomainModel &m) {
        std::vector<FunctionDecl> pending;
        for (size_t i = 1; i < e.items.size(); ++i) {
            const SExpr &it = e.items[i];
            if (it.is_symbol("-")) {
                if (i + 1 >= e.items.size()) {
                    error(it.loc, "dangling '-' in function declarations");
                    return;
                }
                std::vector<std::string> result = type_spec(e.items[i + 1]);
                ++i;
                for (FunctionDecl &d : pending) {
                    d.result_types = result;
                    (multi ? m.multi_functions : m.functions).push_back(std::move(d));
                }
                pending.clear();
            } else if (it.is_list() && !it.items.empty() && it.items[0].is_symbol()) {
                FunctionDecl d;
                d.name = it.items[0].text;
                d.loc = it.loc;
                d.multi = multi;
                d.params = typed_list(it.items, 1, it.items.size());
                pending.push_back(std::move(d));
            } else {
                error(it.loc, "expected a function signature");
            }
        }
        for (FunctionDecl &d : pending)
            error(d.loc, "function " + d.name + " is missing a result type");
    }

    void action(const SExpr &e, DomainModel &m) {
        if (e.items.size() < 2 || !e.items[1].is_symbol()) {
            error(e.loc, "expected (:action NAME ...)");
            return;
        }
        ActionSchema a;
        a.name = e.items[1].text;
        a.loc = e.loc;
        for (size_t i = 2; i + 1 < e.items.size(); i += 2) {
            if (!e.items[i].is_symbol()) {
                error(e.items[i].loc, "expected :parameters/:precondition/:effect");
                return;
            }
            const std::string &key = e.items[i].text;
            const SExpr &body = e.items[i + 1];
            if (key == ":parameters") {
                if (!body.is_list()) {
                    error(body.loc, ":parameters expects a list");
                    return;
                }
                a.params = typed_list(body.items, 0, body.items.size());
            } else if (key == ":precondition") {
                a.preconditions = condition(body);
            } else if (key == ":effect") {
                effects(body, a.effects);
            } else {
                error(e.items[i].loc, "unknown action keyword " + key);
            }
        }
        m.action_schemas.push_back(std::move(a));
    }

    void effects(const SExpr &e, std::vector<EffectExpr> &out) {
        if (e.is_list() && !e.items.empty() && e.items[0].is_symbol("and")) {
            for (size_t i = 1; i < e.items.size(); ++i) effect_one(e.items[i], out);
            return;
        }
        effect_one(e, out);
    }

    void effect_one(const SExpr &e, std::vector<EffectExpr> &out) {
        EffectExpr op;
        op.loc = e.loc;
        if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
            error(e.loc, "expected an effect operation");
            return;
        }
        const std::string &h = e.items[0].text;
        if (h == "assign") {
            if (e.items.size() != 3 || !e.items[2].is_symbol()) {
                error(e.loc, "expected (assign (fluent args) value)");
                return;
            }
            op.kind = EffectExpr::Kind::Assign;
            op.value = e.items[2].text;
            if (term(e.items[1], op.head, op.args)) out.push_back(std::move(op));
        } else if (h == "not") {
            if (e.items.size() != 2 || !e.items[1].is_list() || e.items[1].items.empty()) {
                error(e.loc, "expected (not (predicate args)) or (not (= (fluent args) value))");
                return;
            }
            const SExpr &inner = e.items[1];
            if (inner.items[0].is_symbol("=")) {
                if (inner.items.size() != 3 || !inner.items[2].is_symbol()) {
                    error(inner.loc, "expected (not (= (fluent args) value))");
                    return;
                }
                op.kind = EffectExpr::Kind::Deny;
                op.value = inner.items[2].text;
                if (term(inner.items[1], op.head, op.args)) out.push_back(std::move(op));
            } else {
                op.kind = EffectExpr::Kind::PredicateSet;
                op.positive = false;
                if (term(inner, op.head, op.args)) out.push_back(std::move(op));
            }
        } else if (h == "and" || h == "or" || h == "when" || h == "forall") {
            error(e.loc, "effects are conjunctions of assignments and predicate literals; '" + h +
                             "' is not allowed here");
        } else {
            op.kind = EffectExpr::Kind::PredicateSet;
            op.positive = true;
            if (term(e, op.head, op.args)) out.push_back(std::move(op));
        }
    }

    void check_invariants(DomainModel &m) {
        auto type_known = [&](const std::string &t) {
            return t == "object" || m.type_hierarchy.count(t);
        };
        auto check_types = [&](const std::vector<std::string> &ts, SourceLoc loc) {
            for (const std::string &t : ts)
                if (!type_known(t)) error(loc, "undeclared type '" + t + "' in a signature");
        };
        for (const auto &p : m.predicates)
            for (const auto &t : p.params) check_types(t.types, t.loc);
        for (const auto *list : {&m.functions, &m.multi_functions})
            for (const auto &f : *list) {
                for (const auto &t : f.params) check_types(t.types, t.loc);
                check_types(f.result_types, f.loc);
            }
        for (const auto &a : m.action_schemas) {
            std::set<std::string> seen;
            for (const auto &p : a.params) {
                check_types(p.types, p.loc);
                if (!seen.insert(p.name).second)
                    error(p.loc, "duplicate parameter " + p.name + " in action " + a.name);
            }
        }
    }
};

class ProblemParser : public SectionParser {
public:
    using SectionParser::SectionParser;

    std::optional<ProblemModel> run(const SExpr &top) {
        if (!top.is_list() || top.items.size() < 2 || !top.items[0].is_symbol("define") ||
            !top.items[1].is_list() || top.items[1].items.size() != 2 ||
            !top.items[1].items[0].is_symbol("problem") || !top.items[1].items[1].is_symbol()) {
            error(top.loc, "expected (define (problem NAME) ...)");
            return std::nullopt;
        }
        ProblemModel m;
        m.name = top.items[1].items[1].text;
        bool have_goal = false;
        for (size_t i = 2; i < top.items.size(); ++i) section(top.items[i], m, have_goal);
        if (!have_goal) error(top.loc, "problem is missing a :global-goal section");
        return m;
    }

private:
    void section(const SExpr &e, ProblemModel &m, bool &have_goal) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
            error(e.loc, "expected a problem section");
            return;
        }
        const std::string &key = e.items[0].text;
        if (key == ":domain") {
            if (e.items.size() == 2 && e.items[1].is_symbol())
                m.domain_name = e.items[1].text;
            else
                error(e.loc, "expected (:domain NAME)");
        } else if (key == ":objects") {
            m.objects = typed_list(e.items, 1, e.items.size());
        } else if (key == ":shared-data") {
            shared_data(e, m);
        } else if (key == ":init") {
            for (size_t i = 1; i < e.items.size(); ++i) {
                InitLiteral lit;
                if (init_literal(e.items[i], lit)) m.init.push_back(std::move(lit));
            }
        } else if (key == ":global-goal" || key == ":private-goal") {
            if (e.items.size() != 2) {
                error(e.loc, key + " expects a single goal formula");
                return;
            }
            GoalFormula g = goal(e.items[1]);
            if (key == ":global-goal") {
                m.global_goal = std::move(g);
                have_goal = true;
            } else {
                m.private_goal = std::move(g);
            }
        } else {
            error(e.loc, "unknown section keyword " + key);
        }
    }

    GoalFormula goal(const SExpr &e) {
        GoalFormula g;
        if (e.is_list() && !e.items.empty() &&
            (e.items[0].is_symbol("and") || e.items[0].is_symbol("or"))) {
            g.disjunctive = e.items[0].is_symbol("or");
            for (size_t i = 1; i < e.items.size(); ++i) {
                Atom a;
                if (atom(e.items[i], a)) g.atoms.push_back(std::move(a));
            }
            return g;
        }
        Atom a;
        if (atom(e, a)) g.atoms.push_back(std::move(a));
        return g;
    }

    // :shared-data holds a flat sequence: PATTERN [- AGENTSPEC] PATTERN ...
    void shared_data(const SExpr &e, ProblemModel &m) {
        size_t i = 1;
        while (i < e.items.size()) {
            const SExpr &p = e.items[i];
            SharePattern sp;
            sp.loc = p.loc;
            if (!pattern(p, sp)) {
                ++i;
                continue;
            }
            ++i;
            if (i < e.items.size() && e.items[i].is_symbol("-")) {
                ++i;
                if (i >= e.items.size()) {
                    error(e.items[i - 1].loc, "dangling '-' in :shared-data");
                    return;
                }
                sp.all_agents = false;
                const SExpr &spec = e.items[i];
                if (spec.is_symbol()) {
                    sp.recipients.push_back(spec.text);
                } else if (spec.is_list() && !spec.items.empty() && spec.items[0].is_symbol("either")) {
                    for (size_t k = 1; k < spec.items.size(); ++k) {
                        if (spec.items[k].is_symbol())
                            sp.recipients.push_back(spec.items[k].text);
                        else
                            error(spec.items[k].loc, "expected an agent name");
                    }
                } else {
                    error(spec.loc, "expected an agent name or (either ...)");
                }
                ++i;
            }
            m.shared_data.push_back(std::move(sp));
        }
    }

    bool pattern(const SExpr &p, SharePattern &sp) {
        if (!p.is_list() || p.items.empty()) {
            error(p.loc, "expected a share pattern");
            return false;
        }
        if (p.items[0].is_list()) {
            // ((fluent sig) - value-type)
            if (p.items.size() != 3 || !p.items[1].is_symbol("-")) {
                error(p.loc, "expected ((fluent args) - value-type)");
                return false;
            }
            const SExpr &sig = p.items[0];
            if (sig.items.empty() || !sig.items[0].is_symbol()) {
                error(sig.loc, "expected a fluent signature");
                return false;
            }
            sp.head = sig.items[0].text;
            sp.params = typed_list(sig.items, 1, sig.items.size());
            sp.value_types = type_spec(p.items[2]);
            return true;
        }
        if (!p.items[0].is_symbol()) {
            error(p.loc, "expected a predicate or fluent pattern");
            return false;
        }
        sp.head = p.items[0].text;
        sp.params = typed_list(p.items, 1, p.items.size());
        return true;
    }

    bool init_literal(const SExpr &e, InitLiteral &lit) {
        lit.loc = e.loc;
        if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
            error(e.loc, "expected an init literal");
            return false;
        }
        if (e.items[0].is_symbol("not")) {
            if (e.items.size() != 2) {
                error(e.loc, "(not ...) takes exactly one literal");
                return false;
            }
            if (!init_literal(e.items[1], lit)) return false;
            lit.negated = !lit.negated;
            lit.loc = e.loc;
            return true;
        }
        if (e.items[0].is_symbol("=")) {
            if (e.items.size() != 3) {
                error(e.loc, "expected (= (fluent args) value)");
                return false;
            }
            if (!term(e.items[1], lit.head, lit.args)) return false;
            const SExpr &v = e.items[2];
            if (v.is_symbol()) {
                lit.kind = InitLiteral::Kind::FunctionEq;
                lit.value = v.text;
                return true;
            }
            if (v.is_brace()) {
                lit.kind = InitLiteral::Kind::MultiEq;
                for (const SExpr &mem : v.items) {
                    if (mem.is_symbol())
                        lit.value_set.push_back(mem.text);
                    else
                        error(mem.loc, "expected an object name in a multi-function value set");
                }
                return true;
            }
            error(v.loc, "expected an object or {object ...} value");
            return false;
        }
        lit.kind = InitLiteral::Kind::Predicate;
        return term(e, lit.head, lit.args);
    }
};

std::optional<SExpr> single_form(const std::string &text, const std::string &file,
                                 std::vector<Diagnostic> &diags) {
    std::vector<SExpr> forms = read_sexprs(text, file, diags);
    if (has_errors(diags)) return std::nullopt;
    if (forms.size() != 1) {
        SourceLoc loc = forms.size() > 1 ? forms[1].loc : SourceLoc{1, 1};
        diags.push_back({Severity::Error, loc, file, "expected exactly one (define ...) form"});
        return std::nullopt;
    }
    return forms[0];
}

}  // namespace

ParseResult<DomainModel> parse_domain(const std::string &text, const std::string &file) {
    ParseResult<DomainModel> r;
    auto form = single_form(text, file, r.diags);
    if (!form) return r;
    DomainParser p(file, r.diags);
    auto m = p.run(*form);
    if (m && !has_errors(r.diags)) r.value = std::move(m);
    return r;
}

ParseResult<ProblemModel> parse_problem(const std::string &text, const std::string &file) {
    ParseResult<ProblemModel> r;
    auto form = single_form(text, file, r.diags);
    if (!form) return r;
    ProblemParser p(file, r.diags);
    auto m = p.run(*form);
    if (m && !has_errors(r.diags)) r.value = std::move(m);
    return r;
}

namespace {

std::string read_file_or_fail(const std::string &path, std::vector<Diagnostic> &diags, bool &ok) {
    std::ifstream in(path);
    if (!in) {
        diags.push_back({Severity::Error, {0, 0}, path, "cannot open file"});
        ok = false;
        return "";
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    ok = true;
    return ss.str();
}

}  // namespace

ParseResult<DomainModel> parse_domain_file(const std::string &path) {
    ParseResult<DomainModel> r;
    bool ok = false;
    std::string text = read_file_or_fail(path, r.diags, ok);
    if (!ok) return r;
    return parse_domain(text, path);
}

ParseResult<ProblemModel> parse_problem_file(const std::string &path) {
    ParseResult<ProblemModel> r;
    bool ok = false;
    std::string text = read_file_or_fail(path, r.diags, ok);
    if (!ok) return r;
    return parse_problem(text, path);
}

}  // namespace mapop
