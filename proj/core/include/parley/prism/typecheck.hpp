#pragma once

#include <string>
#include <vector>

#include "parley/prism/ast.hpp"

namespace parley::prism {

enum class Severity { Error, Warning };

struct Diagnostic {
    int line = 0;
    int col = 0;
    Severity severity = Severity::Error;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

/// Static checks over an AST. Never throws; results are ordered by
/// (line, col, message).
std::vector<Diagnostic> typecheck(const Model& model);

bool has_errors(const std::vector<Diagnostic>& diags);

/// `file:line:col: severity: message`
std::string format_diagnostic(const Diagnostic& d, const std::string& file = {});

} // namespace parley::prism
