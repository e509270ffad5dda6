#include "doctest.h"
#include "mapop/parser.hpp"
#include "test_util.hpp"

using namespace mapop;
using namespace mapop::test;

TEST_CASE("transport domain listing parses with zero diagnostics") {
    auto r = parse_domain(read_file(fixture_path("transport/domain_transport.pddl")));
    REQUIRE(r.ok());
    CHECK(r.diags.empty());
    const DomainModel &d = *r.value;
    CHECK(d.name == "transport");
    CHECK(d.action_schemas.size() == 3);
    CHECK(d.action_schemas[0].name == "load");
    CHECK(d.action_schemas[1].name == "unload");
    CHECK(d.action_schemas[2].name == "drive");
    CHECK(d.predicates.size() == 1);
    CHECK(d.functions.size() == 2);
    CHECK(d.multi_functions.size() == 2);
    CHECK(d.type_hierarchy.at("raw-material") == "package");
    CHECK(d.type_hierarchy.at("truck") == "object");
}

TEST_CASE("warehouse domain: acquire has 3 preconditions and 3 effect operations") {
    auto r = parse_domain(read_file(fixture_path("transport/domain_warehouse.pddl")));
    REQUIRE(r.ok());
    const ActionSchema *acquire = nullptr;
    for (const auto &a : r.value->action_schemas)
        if (a.name == "acquire") acquire = &a;
    REQUIRE(acquire != nullptr);
    CHECK(acquire->preconditions.size() == 3);
    CHECK(acquire->effects.size() == 3);
}

TEST_CASE("minimal well-formed domain parses to empty sections") {
    auto r = parse_domain("(define (domain D) (:types) (:predicates) )");
    REQUIRE(r.ok());
    CHECK(r.value->name == "d");
    CHECK(r.value->predicates.empty());
    CHECK(r.value->type_hierarchy.empty());
    CHECK(r.value->action_schemas.empty());
}

TEST_CASE("ag1 problem listing parses: objects, share patterns, goal") {
    auto r = parse_problem(read_file(fixture_path("transport/problem_ag1.pddl")));
    REQUIRE(r.ok());
    const ProblemModel &p = *r.value;
    CHECK(p.name == "ag1");
    CHECK(p.domain_name == "transport");
    // The verbatim listing declares 13 objects (3 agents, 1 truck, 6 cities,
    // 3 packages).
    CHECK(p.objects.size() == 13);
    CHECK(p.shared_data.size() == 4);
    CHECK(p.global_goal.atoms.size() == 2);
    CHECK_FALSE(p.global_goal.disjunctive);
    CHECK_FALSE(p.private_goal.has_value());

    // (empty ?c - city) - (either Ag2 Ag3): explicit recipients.
    const SharePattern &sp0 = p.shared_data[0];
    CHECK(sp0.head == "empty");
    CHECK_FALSE(sp0.all_agents);
    CHECK(sp0.recipients == std::vector<std::string>{"ag2", "ag3"});
    CHECK(sp0.value_types.empty());

    // ((at ?t - truck) - city): no agent list means ALL.
    const SharePattern &sp1 = p.shared_data[1];
    CHECK(sp1.head == "at");
    CHECK(sp1.all_agents);
    CHECK(sp1.value_types == std::vector<std::string>{"city"});

    // Multi-function init literals carry brace-delimited sets.
    bool found_link_set = false;
    for (const auto &lit : p.init)
        if (lit.kind == InitLiteral::Kind::MultiEq && lit.head == "link" && !lit.negated &&
            lit.args == std::vector<std::string>{"ca"})
            found_link_set = lit.value_set == std::vector<std::string>{"cb", "cc"};
    CHECK(found_link_set);
}

TEST_CASE("share pattern without agent list is shared with ALL") {
    auto r = parse_problem("(define (problem x) (:domain d) (:objects t1 - truck) "
                           "(:shared-data ((at ?t - truck) - city)) "
                           "(:init) (:global-goal (= (at t1) c)))");
    REQUIRE(r.ok());
    REQUIRE(r.value->shared_data.size() == 1);
    CHECK(r.value->shared_data[0].all_agents);
}

TEST_CASE("syntax errors carry line and column") {
    auto r = parse_domain("(define (domain D)\n  (:types a - ");
    CHECK_FALSE(r.ok());
    REQUIRE_FALSE(r.diags.empty());
    CHECK(r.diags[0].loc.line >= 1);
}

TEST_CASE("unknown section keyword is an error") {
    auto r = parse_domain("(define (domain D) (:types) (:wibble 1))");
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto &d : r.diags)
        if (d.message.find("unknown section keyword") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("undeclared type in a signature is an error") {
    auto r = parse_domain("(define (domain D) (:types a - object) (:predicates (p ?x - ghost)))");
    CHECK_FALSE(r.ok());
}

TEST_CASE("unknown requirements produce warnings, not errors") {
    auto r = parse_domain("(define (domain D) (:requirements :typing :time-travel) (:types))");
    CHECK(r.ok());
    bool warned = false;
    for (const auto &d : r.diags)
        if (d.severity == Severity::Warning &&
            d.message.find(":time-travel") != std::string::npos)
            warned = true;
    CHECK(warned);
}

TEST_CASE("duplicate action parameters are an error") {
    auto r = parse_domain("(define (domain D) (:types t - object) "
                          "(:action a :parameters (?x - t ?x - t) :precondition (and) :effect (and)))");
    CHECK_FALSE(r.ok());
}

TEST_CASE("disjunction in effects is rejected") {
    auto r = parse_domain("(define (domain D) (:types) (:predicates (p)) "
                          "(:action a :parameters () :precondition (and) :effect (or (p))))");
    CHECK_FALSE(r.ok());
}

TEST_CASE("validate_pair accepts the paired transport listings") {
    auto d = parse_domain(read_file(fixture_path("transport/domain_transport.pddl")));
    auto p = parse_problem(read_file(fixture_path("transport/problem_ag1.pddl")));
    REQUIRE(d.ok());
    REQUIRE(p.ok());
    auto v = validate_pair(*d.value, *p.value);
    CHECK(v.ok());
    CHECK(v.diags.empty());
}

TEST_CASE("goal on an undeclared object is rejected") {
    auto d = parse_domain(read_file(fixture_path("transport/domain_transport.pddl")));
    REQUIRE(d.ok());
    auto p = parse_problem("(define (problem bad) (:domain transport) "
                           "(:objects t1 - truck ca - city) (:init) "
                           "(:global-goal (= (pos p9) ca)))");
    REQUIRE(p.ok());  // parse succeeds; validation rejects
    auto v = validate_pair(*d.value, *p.value);
    CHECK_FALSE(v.ok());
    bool found = false;
    for (const auto &diag : v.diags)
        if (diag.message.find("undeclared object 'p9'") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("init literal with a type mismatch is rejected") {
    auto d = parse_domain(read_file(fixture_path("transport/domain_transport.pddl")));
    REQUIRE(d.ok());
    // (at t1) maps to city but p3 is a package.
    auto p = parse_problem("(define (problem bad) (:domain transport) "
                           "(:objects t1 - truck p3 - raw-material ca - city) "
                           "(:init (= (at t1) p3)) (:global-goal (= (at t1) ca)))");
    REQUIRE(p.ok());
    auto v = validate_pair(*d.value, *p.value);
    CHECK_FALSE(v.ok());
    bool found = false;
    for (const auto &diag : v.diags)
        if (diag.message.find("type mismatch") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("share pattern matching no declaration is rejected") {
    auto d = parse_domain(read_file(fixture_path("transport/domain_transport.pddl")));
    REQUIRE(d.ok());
    auto p = parse_problem("(define (problem bad) (:domain transport) "
                           "(:objects t1 - truck ca - city) "
                           "(:shared-data (speed ?t - truck)) "
                           "(:init) (:global-goal (= (at t1) ca)))");
    REQUIRE(p.ok());
    auto v = validate_pair(*d.value, *p.value);
    CHECK_FALSE(v.ok());
}

TEST_CASE("round-trip: pretty-print then re-parse is structurally equal") {
    // Canonical-print equality is the structural-equality witness: the
    // printer is deterministic, so equal prints mean equal models.
    for (const char *rel : {"transport/domain_transport.pddl", "transport/domain_warehouse.pddl"}) {
        auto first = parse_domain(read_file(fixture_path(rel)));
        REQUIRE(first.ok());
        std::string printed = pretty_print(*first.value);
        auto second = parse_domain(printed);
        REQUIRE(second.ok());
        CHECK(pretty_print(*second.value) == printed);
    }
    for (const char *rel : {"transport/problem_ag1.pddl", "transport/problem_ag2.pddl",
                            "transport/problem_ag3.pddl"}) {
        auto first = parse_problem(read_file(fixture_path(rel)));
        REQUIRE(first.ok());
        std::string printed = pretty_print(*first.value);
        auto second = parse_problem(printed);
        REQUIRE(second.ok());
        CHECK(pretty_print(*second.value) == printed);
    }
}
