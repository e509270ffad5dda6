#pragma once

#include <string>
#include <vector>

#include "mapop/diagnostics.hpp"

namespace mapop {

// S-expression tree. Brace sets ({cB cC}) are the multi-function value
// notation of the MAP dialect; they never nest in practice but the reader
// allows arbitrary members.
struct SExpr {
    enum class Kind { Symbol, List, BraceSet };

    Kind kind = Kind::Symbol;
    std::string text;          // symbol text, lowercased
    std::vector<SExpr> items;  // list / brace-set members
    SourceLoc loc;

    bool is_symbol() const { return kind == Kind::Symbol; }
    bool is_symbol(const std::string &s) const { return kind == Kind::Symbol && text == s; }
    bool is_list() const { return kind == Kind::List; }
    bool is_brace() const { return kind == Kind::BraceSet; }
};

// Reads every top-level form in `text`. Identifiers are lowercased on read
// (PDDL identifiers are case-insensitive). `;` starts a comment to end of
// line. Errors are appended to `diags`.
std::vector<SExpr> read_sexprs(const std::string &text, const std::string &file,
                               std::vector<Diagnostic> &diags);

}  // namespace mapop
