#include "qrl/typecheck/diagnostic.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace qrl::typecheck {

std::string_view to_string(DiagnosticKind kind) noexcept {
    switch (kind) {
    case DiagnosticKind::SyntaxError: return "SyntaxError";
    case DiagnosticKind::UndefinedName: return "UndefinedName";
    case DiagnosticKind::Redeclaration: return "Redeclaration";
    case DiagnosticKind::TypeMismatch: return "TypeMismatch";
    case DiagnosticKind::ArityMismatch: return "ArityMismatch";
    case DiagnosticKind::CloneViolation: return "CloneViolation";
    case DiagnosticKind::OverlapViolation: return "OverlapViolation";
    case DiagnosticKind::ConstViolation: return "ConstViolation";
    case DiagnosticKind::FreshnessUnproven: return "FreshnessUnproven";
    case DiagnosticKind::NonCondInQuantumIf: return "NonCondInQuantumIf";
    case DiagnosticKind::IrreversibleStatement: return "IrreversibleStatement";
    case DiagnosticKind::KindViolation: return "KindViolation";
    case DiagnosticKind::QuantumRead: return "QuantumRead";
    case DiagnosticKind::UseAfterMove: return "UseAfterMove";
    }
    return "Unknown";
}

std::string render(const Diagnostic &d, std::string_view file) {
    return fmt::format("{}:{}:{}: {}: {}: {}", file, d.span.line, d.span.column,
                       d.severity == Severity::Error ? "error" : "warning", to_string(d.kind),
                       d.message);
}

bool has_errors(const std::vector<Diagnostic> &diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

} // namespace qrl::typecheck
