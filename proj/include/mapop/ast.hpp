#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapop/diagnostics.hpp"

namespace mapop {

// Syntactic models for the MAP dialect of PDDL3.1 (one domain file and one
// problem file per agent). All identifiers are stored lowercased.

struct TypedName {
    std::string name;
    std::vector<std::string> types;  // union; "(either a b)" yields {a,b}; defaults to {"object"}
    SourceLoc loc;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
    SourceLoc loc;
};

// Covers both :functions and :multi-functions entries.
struct FunctionDecl {
    std::string name;
    std::vector<TypedName> params;
    std::vector<std::string> result_types;  // union
    bool multi = false;
    SourceLoc loc;
};

// A condition atom. Arguments are parameter variables ("?x") or constants.
struct Atom {
    enum class Kind { Predicate, FunctionEq, Member };
    Kind kind = Kind::Predicate;
    bool negated = false;
    std::string head;
    std::vector<std::string> args;
    std::string value;  // FunctionEq / Member only; predicates use implicit true/false
    SourceLoc loc;
};

struct EffectExpr {
    enum class Kind {
        PredicateSet,  // (p args) / (not (p args)) -> boolean assign
        Assign,        // (assign (f args) v)
        Deny,          // (not (= (f args) v))
    };
    Kind kind = Kind::PredicateSet;
    bool positive = true;  // PredicateSet polarity
    std::string head;
    std::vector<std::string> args;
    std::string value;
    SourceLoc loc;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Atom> preconditions;  // conjunction
    std::vector<EffectExpr> effects;  // conjunction
    SourceLoc loc;
};

struct DomainModel {
    std::string name;
    std::vector<std::string> requirements;           // recorded, not enforced
    std::map<std::string, std::string> type_hierarchy;  // child -> parent; root "object" implicit
    std::vector<PredicateDecl> predicates;
    std::vector<FunctionDecl> functions;
    std::vector<FunctionDecl> multi_functions;
    std::vector<ActionSchema> action_schemas;
};

struct InitLiteral {
    enum class Kind {
        Predicate,   // (empty cB) / (not (empty cA))
        FunctionEq,  // (= (at t1) cA) / (not (= (at t1) cB))
        MultiEq,     // (= (link cA) {cB cC}) / (not (= (link cA) {cA cD}))
    };
    Kind kind = Kind::Predicate;
    bool negated = false;
    std::string head;
    std::vector<std::string> args;
    std::string value;                    // FunctionEq
    std::vector<std::string> value_set;   // MultiEq
    SourceLoc loc;
};

struct GoalFormula {
    bool disjunctive = false;  // (or ...) vs (and ...) / single atom
    std::vector<Atom> atoms;
};

struct SharePattern {
    std::string head;
    std::vector<TypedName> params;
    std::vector<std::string> value_types;  // empty => predicate pattern (boolean)
    bool all_agents = true;                // no trailing agent spec => share with ALL
    std::vector<std::string> recipients;
    SourceLoc loc;
};

struct ProblemModel {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;  // declaration order preserved
    std::vector<SharePattern> shared_data;
    std::vector<InitLiteral> init;
    GoalFormula global_goal;
    std::optional<GoalFormula> private_goal;
};

// A (domain, problem) pair that passed cross-validation.
struct ValidatedAgentInput {
    DomainModel domain;
    ProblemModel problem;
    std::string domain_file;
    std::string problem_file;
};

}  // namespace mapop
