#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapop/ast.hpp"
#include "mapop/diagnostics.hpp"

namespace mapop {

// Parsers collect diagnostics instead of throwing; a result without a value
// (or with error-severity diagnostics) means the input was rejected.
template <typename T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diagnostic> diags;

    bool ok() const { return value.has_value() && !has_errors(diags); }
};

ParseResult<DomainModel> parse_domain(const std::string &text, const std::string &file = "<domain>");
ParseResult<ProblemModel> parse_problem(const std::string &text, const std::string &file = "<problem>");

// Cross-checks arity/typing of init literals, goal atoms and share patterns
// against the domain declarations.
ParseResult<ValidatedAgentInput> validate_pair(const DomainModel &domain, const ProblemModel &problem,
                                               const std::string &domain_file = "<domain>",
                                               const std::string &problem_file = "<problem>");

// Canonical pretty-printers. parse(pretty_print(m)) is structurally equal to
// m, and pretty_print is a fixpoint after one round trip.
std::string pretty_print(const DomainModel &domain);
std::string pretty_print(const ProblemModel &problem);

ParseResult<DomainModel> parse_domain_file(const std::string &path);
ParseResult<ProblemModel> parse_problem_file(const std::string &path);

}  // namespace mapop
