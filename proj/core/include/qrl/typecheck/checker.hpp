#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrl/frontend/ast.hpp"
#include "qrl/typecheck/diagnostic.hpp"

namespace qrl::typecheck {

using frontend::Node;
using frontend::SubKind;
using frontend::TypeBase;
using frontend::TypeExpr;

struct ParamSig {
    std::string name;
    TypeExpr type;
};

struct SubSignature {
    std::string name;
    SubKind kind = SubKind::Procedure;
    bool cond = false;
    bool builtin = false;
    std::vector<ParamSig> params;
    /// Trailing parameters that may be omitted (Phase takes an optional register).
    std::size_t optional_params = 0;
    TypeExpr result;
};

/// Built-in subroutines, all conditional: H, Not, CNot, Swap, RotX/Y/Z, Phase,
/// CPhase, Sigma_x/y/z, X, Y, Z, S, T, SqrtNot, FT and dump_q.
const std::map<std::string, SubSignature> &stdlib();

/// Whether a sub of kind `caller` may call one of kind `callee`.
bool kind_allows(SubKind caller, SubKind callee);

/// Static checker. Global declarations persist across check() calls so a
/// REPL can feed it one input at a time; copy the checker to roll back.
class Checker {
  public:
    Checker();

    /// Checks `program` and rewrites If nodes whose condition is a register
    /// into QuantumIf nodes. Diagnostics come back in source order.
    std::vector<Diagnostic> check(Node &program);

    [[nodiscard]] const std::map<std::string, SubSignature> &subroutines() const { return subs_; }

    struct Symbol {
        TypeExpr type;
        std::optional<std::int64_t> length; // register width when statically known
        bool consumed = false;
        bool fresh = false;
        std::vector<std::string> alias_parts;
        frontend::Span decl;
    };

  private:
    friend class Walker;
    std::map<std::string, SubSignature> subs_;
    std::map<std::string, Symbol> globals_;
    std::vector<std::string> modules_;
};

/// Confirms that an operator or qufunct body contains only invertible
/// statements. Returns the IrreversibleStatement diagnostics found.
std::vector<Diagnostic> reversibility_audit(const Node &sub_decl);

} // namespace qrl::typecheck
