#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mapop/parser.hpp"
#include "mapop/task.hpp"

namespace mapop::test {

inline std::string fixture_path(const std::string &rel) { return std::string(FIXTURES_DIR) + "/" + rel; }

inline std::string read_file(const std::string &path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ValidatedAgentInput load_pair(const std::string &domain_rel, const std::string &problem_rel) {
    auto d = parse_domain_file(fixture_path(domain_rel));
    REQUIRE(d.ok());
    auto p = parse_problem_file(fixture_path(problem_rel));
    REQUIRE(p.ok());
    auto v = validate_pair(*d.value, *p.value, domain_rel, problem_rel);
    REQUIRE(v.ok());
    return *v.value;
}

// The three-agent transportation and storage task of the worked example.
inline MapTask transport_task() {
    std::vector<ValidatedAgentInput> inputs;
    inputs.push_back(load_pair("transport/domain_transport.pddl", "transport/problem_ag1.pddl"));
    inputs.push_back(load_pair("transport/domain_transport.pddl", "transport/problem_ag2.pddl"));
    inputs.push_back(load_pair("transport/domain_warehouse.pddl", "transport/problem_ag3.pddl"));
    std::vector<Diagnostic> diags;
    auto task = ground_task(inputs, diags);
    for (const auto &d : diags) INFO(d.message);
    REQUIRE(task.has_value());
    return std::move(*task);
}

inline Fluent make_fluent(const MapTask &task, const std::string &head,
                          const std::vector<std::string> &args, const std::string &value,
                          bool positive = true, AgentId scope = kNoAgent) {
    std::vector<ObjectId> ids;
    for (const auto &a : args) {
        ObjectId o = task.objects.find(a);
        REQUIRE_MESSAGE(o >= 0, "unknown object " << a);
        ids.push_back(o);
    }
    VarId v = task.vars.find(head, ids, scope);
    REQUIRE_MESSAGE(v >= 0, "unknown variable " << head);
    ObjectId d = task.objects.find(value);
    REQUIRE_MESSAGE(d >= 0, "unknown value " << value);
    return {v, d, positive};
}

inline ActionId find_action(const MapTask &task, const std::string &agent_name,
                            const std::string &action_name) {
    auto it = task.action_index.find(agent_name + "/" + action_name);
    REQUIRE_MESSAGE(it != task.action_index.end(), "unknown action " << agent_name << "/"
                                                                     << action_name);
    return it->second;
}

}  // namespace mapop::test
