#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlbench/theory.hpp"

namespace dlbench {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based
    std::string message;
    Severity severity = Severity::Error;

    friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

std::string toString(const ParseDiagnostic& d);

struct ParseResult {
    std::optional<Theory> theory;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const noexcept { return theory.has_value(); }
};

/// Parses the `.dfl` theory format, one statement per line:
///
///     >> A0000002                  fact
///     r1: A0000002, -B => A0000001 rule; -> strict, => defeasible, ~> defeater
///     r2 > r1                      superiority, left side superior
///
/// `#` starts a comment. Priorities may reference rules declared later.
/// Every syntax error is reported, not only the first; when any error is
/// present no theory is returned.
ParseResult parseTheory(std::string_view text);

/// Canonical text: facts, then rules with each priority placed after the
/// rule it was anchored to. One statement per line, LF terminated.
std::string printTheory(const Theory& t);

}  // namespace dlbench
