#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qrl/frontend/source.hpp"

namespace qrl::typecheck {

enum class Severity { Error, Warning };

enum class DiagnosticKind {
    SyntaxError,
    UndefinedName,
    Redeclaration,
    TypeMismatch,
    ArityMismatch,
    CloneViolation,
    OverlapViolation,
    ConstViolation,
    FreshnessUnproven,
    NonCondInQuantumIf,
    IrreversibleStatement,
    KindViolation,
    QuantumRead,
    UseAfterMove,
};

std::string_view to_string(DiagnosticKind kind) noexcept;

struct Diagnostic {
    DiagnosticKind kind = DiagnosticKind::SyntaxError;
    Severity severity = Severity::Error;
    frontend::Span span;
    std::string message;
};

/// "file:line:col: severity: Kind: message".
std::string render(const Diagnostic &d, std::string_view file);

bool has_errors(const std::vector<Diagnostic> &diags);

} // namespace qrl::typecheck
