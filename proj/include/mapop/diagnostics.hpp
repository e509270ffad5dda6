#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mapop {

enum class Severity { Warning, Error };

struct SourceLoc {
    int line = 0;
    int col = 0;
};

// One parser/validator finding. Printed one per line in a stable format so
// harness scripts can grep them.
struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string file;
    std::string message;
};

inline std::ostream &operator<<(std::ostream &os, const Diagnostic &d) {
    os << (d.file.empty() ? "<input>" : d.file) << ':' << d.loc.line << ':' << d.loc.col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
    return os;
}

inline bool has_errors(const std::vector<Diagnostic> &diags) {
    for (const auto &d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

}  // namespace mapop
