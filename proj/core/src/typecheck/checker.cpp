#include "qrl/typecheck/checker.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "qrl/error.hpp"
#include "qrl/gates/gate.hpp"

namespace qrl::typecheck {

using frontend::NodeKind;
using frontend::Span;

namespace {

TypeExpr type_of(TypeBase base) {
    TypeExpr t;
    t.base = base;
    return t;
}

bool is_numeric(const TypeExpr &t) {
    return !t.payload && (t.base == TypeBase::Int || t.base == TypeBase::Real || t.base == TypeBase::Bool);
}

bool is_register_expression(const Node &e) {
    switch (e.kind) {
    case NodeKind::Ident:
    case NodeKind::Index:
    case NodeKind::Slice:
        return true;
    case NodeKind::Concat:
        return is_register_expression(e[0]) && is_register_expression(e[1]);
    default:
        return false;
    }
}

bool is_diagonal_gate(std::string_view name) {
    static const std::set<std::string, std::less<>> kDiagonal = {
        "I", "Z", "S", "T", "Phase", "RotZ", "CPhase", "Sigma_z", "sigma_z", "rz"};
    return kDiagonal.contains(name);
}

bool is_permutation_gate(std::string_view name) {
    static const std::set<std::string, std::less<>> kPermutation = {
        "I", "X", "Not", "NOT", "not", "CNot", "CNOT", "cnot", "Swap", "SWAP", "swap",
        "Toffoli", "toffoli", "Sigma_x", "sigma_x"};
    return kPermutation.contains(name);
}

// Statically known qubit positions inside one named register.
struct QRef {
    std::string root;
    bool whole = false;
    bool known = false;
    std::vector<std::int64_t> idx;
};

bool refs_overlap(const std::vector<QRef> &a, const std::vector<QRef> &b) {
    for (const auto &ra : a) {
        for (const auto &rb : b) {
            if (ra.root != rb.root) {
                continue;
            }
            if (ra.whole || rb.whole) {
                return true;
            }
            if (ra.known && rb.known) {
                for (auto i : ra.idx) {
                    if (std::find(rb.idx.begin(), rb.idx.end(), i) != rb.idx.end()) {
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

} // namespace

const std::map<std::string, SubSignature> &stdlib() {
    static const std::map<std::string, SubSignature> table = [] {
        std::map<std::string, SubSignature> m;
        auto add = [&](const std::string &name, SubKind kind, std::vector<ParamSig> params,
                       std::size_t optional = 0) {
            SubSignature s;
            s.name = name;
            s.kind = kind;
            s.cond = true;
            s.builtin = true;
            s.params = std::move(params);
            s.optional_params = optional;
            m[name] = s;
        };
        const ParamSig q{"q", type_of(TypeBase::Qureg)};
        const ParamSig p{"p", type_of(TypeBase::Qureg)};
        const ParamSig c{"c", type_of(TypeBase::Quconst)};
        const ParamSig angle{"phi", type_of(TypeBase::Real)};
        for (const char *name : {"Not", "X", "Sigma_x"}) {
            add(name, SubKind::Qufunct, {q});
        }
        for (const char *name : {"H", "Y", "Z", "S", "T", "SqrtNot", "Sigma_y", "Sigma_z", "FT"}) {
            add(name, SubKind::Operator, {q});
        }
        add("CNot", SubKind::Qufunct, {q, c});
        add("Swap", SubKind::Qufunct, {q, p});
        for (const char *name : {"RotX", "RotY", "RotZ"}) {
            add(name, SubKind::Operator, {angle, q});
        }
        add("Phase", SubKind::Operator, {angle, c}, 1);
        add("CPhase", SubKind::Operator, {angle, c});
        add("dump_q", SubKind::Procedure, {c});
        return m;
    }();
    return table;
}

bool kind_allows(SubKind caller, SubKind callee) {
    switch (caller) {
    case SubKind::Procedure: return true;
    case SubKind::Operator: return callee != SubKind::Procedure;
    case SubKind::Qufunct: return callee == SubKind::Qufunct;
    }
    return false;
}

class Walker {
  public:
    explicit Walker(Checker &checker) : c_(checker) {}

    std::vector<Diagnostic> diags;

    void program(Node &prog) {
        hoist(prog.children);
        statements(prog.children);
        std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic &a, const Diagnostic &b) {
            return a.span.offset < b.span.offset;
        });
    }

  private:
    using Symbol = Checker::Symbol;

    struct Context {
        const SubSignature *sub = nullptr;
        bool quantum_if = false;
        std::vector<QRef> enable;
    };

    Checker &c_;
    std::vector<std::map<std::string, Symbol>> scopes_;
    Context ctx_;

    // ---- diagnostics ---------------------------------------------------

    void report(DiagnosticKind kind, const Span &span, std::string message,
                Severity severity = Severity::Error) {
        diags.push_back({kind, severity, span, std::move(message)});
    }

    // ---- scopes --------------------------------------------------------

    std::map<std::string, Symbol> &current_scope() {
        return scopes_.empty() ? c_.globals_ : scopes_.back();
    }

    Symbol *lookup(const std::string &name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto f = it->find(name); f != it->end()) {
                return &f->second;
            }
        }
        if (auto f = c_.globals_.find(name); f != c_.globals_.end()) {
            return &f->second;
        }
        return nullptr;
    }

    bool declare(const std::string &name, Symbol sym, const Span &span) {
        auto &scope = current_scope();
        if (scope.contains(name)) {
            report(DiagnosticKind::Redeclaration, span, fmt::format("'{}' is already declared", name));
            return false;
        }
        sym.decl = span;
        scope.emplace(name, std::move(sym));
        return true;
    }

    struct ScopeGuard {
        Walker &w;
        explicit ScopeGuard(Walker &walker) : w(walker) { w.scopes_.emplace_back(); }
        ~ScopeGuard() { w.scopes_.pop_back(); }
        ScopeGuard(const ScopeGuard &) = delete;
        ScopeGuard &operator=(const ScopeGuard &) = delete;
    };

    // ---- hoisting ------------------------------------------------------

    void hoist(const std::vector<Node> &list) {
        for (const auto &s : list) {
            if (s.kind == NodeKind::SubDecl) {
                register_sub(s);
            } else if (s.kind == NodeKind::Module) {
                if (std::find(c_.modules_.begin(), c_.modules_.end(), s.text) == c_.modules_.end()) {
                    c_.modules_.push_back(s.text);
                }
                hoist(s[0].children);
            } else if (s.kind == NodeKind::Block) {
                hoist(s.children);
            }
        }
    }

    void register_sub(const Node &s) {
        if (s.is_extern) {
            if (!stdlib().contains(s.text)) {
                report(DiagnosticKind::UndefinedName, s.span,
                       fmt::format("no built-in subroutine named '{}'", s.text));
            }
            return;
        }
        if (auto it = c_.subs_.find(s.text); it != c_.subs_.end() && !it->second.builtin) {
            report(DiagnosticKind::Redeclaration, s.span,
                   fmt::format("subroutine '{}' is already defined", s.text));
            return;
        }
        SubSignature sig;
        sig.name = s.text;
        sig.kind = s.sub;
        sig.cond = s.cond;
        sig.result = s.type;
        for (const auto &p : s[0].children) {
            sig.params.push_back({p.text, p.type});
        }
        c_.subs_[s.text] = std::move(sig);
    }

    // ---- statements ----------------------------------------------------

    void statements(std::vector<Node> &list) {
        for (auto &s : list) {
            statement(s);
        }
    }

    void block(Node &b) {
        ScopeGuard guard(*this);
        statements(b.children);
    }

    bool irreversible(const Node &s, std::string_view what) {
        if (ctx_.sub && ctx_.sub->kind != SubKind::Procedure) {
            report(DiagnosticKind::IrreversibleStatement, s.span,
                   fmt::format("'{}' is not allowed in {} '{}'", what, to_string(ctx_.sub->kind),
                               ctx_.sub->name));
            return true;
        }
        if (ctx_.quantum_if) {
            report(DiagnosticKind::IrreversibleStatement, s.span,
                   fmt::format("'{}' is not allowed inside a quantum if", what));
            return true;
        }
        return false;
    }

    void statement(Node &s) {
        switch (s.kind) {
        case NodeKind::VarDecl: var_decl(s); break;
        case NodeKind::SubDecl: sub_decl(s); break;
        case NodeKind::Block: block(s); break;
        case NodeKind::If:
        case NodeKind::QuantumIf: if_statement(s); break;
        case NodeKind::While:
            condition(s[0]);
            block(s[1]);
            break;
        case NodeKind::DoUntil:
            block(s[0]);
            condition(s[1]);
            break;
        case NodeKind::ForRange: for_statement(s); break;
        case NodeKind::Assign: assign(s); break;
        case NodeKind::Call:
        case NodeKind::InverseCall: call(s, s.kind == NodeKind::InverseCall); break;
        case NodeKind::Measure: measure(s); break;
        case NodeKind::MeasureIf:
            if (!irreversible(s, "measure")) {
                quantum_operand(s[0]);
                touch(s[0]);
            }
            block(s[1]);
            if (!s[2].empty()) {
                block(s[2]);
            }
            break;
        case NodeKind::Reset: reset(s); break;
        case NodeKind::Dump:
            if (!irreversible(s, "dump") && !s[0].empty()) {
                quantum_operand(s[0]);
            }
            break;
        case NodeKind::Print:
            if (!irreversible(s, "print")) {
                for (const auto &item : s.children) {
                    classical(item, "print");
                }
            }
            break;
        case NodeKind::Return:
            if (!s[0].empty()) {
                expr(s[0]);
            }
            break;
        case NodeKind::Send: send(s); break;
        case NodeKind::SendTo: send_to(s); break;
        case NodeKind::ReceiveFrom: receive_from(s); break;
        case NodeKind::Fork: fork(s); break;
        case NodeKind::ChannelDecl: channel_decl(s); break;
        case NodeKind::AliasFor: alias_for(s); break;
        case NodeKind::GateApply: gate_apply(s); break;
        case NodeKind::Module: {
            ScopeGuard guard(*this);
            statements(s[0].children);
            break;
        }
        default:
            report(DiagnosticKind::TypeMismatch, s.span,
                   fmt::format("unexpected {} in statement position", to_string(s.kind)));
        }
    }

    void var_decl(Node &s) {
        Symbol sym;
        sym.type = s.type;
        if (!s[0].empty()) {
            if (!s.type.is_quantum()) {
                report(DiagnosticKind::TypeMismatch, s[0].span, "only registers take a length");
            } else if (auto t = expr(s[0]); t && !is_numeric(*t)) {
                report(DiagnosticKind::TypeMismatch, s[0].span, "register length must be an integer");
            }
            sym.length = const_int(s[0]);
        } else if (s.type.is_quantum()) {
            sym.length = 1;
        }
        if (!s[1].empty()) {
            const auto t = expr(s[1]);
            if (t && t->is_linear()) {
                report(DiagnosticKind::CloneViolation, s[1].span,
                       fmt::format("cannot initialise '{}' from a quantum value", s.text));
            } else if (t && s.type.is_quantum() && !is_numeric(*t)) {
                report(DiagnosticKind::TypeMismatch, s[1].span,
                       "register initialiser must be a basis value");
            } else if (t) {
                assignable(s.type, *t, s[1].span);
            }
        }
        sym.fresh = s.type.is_quantum();
        declare(s.text, std::move(sym), s.span);
    }

    void sub_decl(Node &s) {
        if (s.is_extern || s[1].empty()) {
            return;
        }
        const auto it = c_.subs_.find(s.text);
        if (it == c_.subs_.end()) {
            return;
        }
        const Context saved = ctx_;
        ctx_ = Context{};
        ctx_.sub = &it->second;
        {
            ScopeGuard guard(*this);
            for (const auto &p : s[0].children) {
                Symbol sym;
                sym.type = p.type;
                if (p.type.base == TypeBase::Qbit) {
                    sym.length = 1;
                }
                sym.fresh = p.type.base == TypeBase::Quvoid;
                declare(p.text, std::move(sym), p.span);
            }
            block(s[1]);
        }
        ctx_ = saved;
    }

    void if_statement(Node &s) {
        const auto t = expr(s[0]);
        if (t && t->is_quantum() && is_register_expression(s[0])) {
            s.kind = NodeKind::QuantumIf;
            if (!s[2].empty()) {
                report(DiagnosticKind::TypeMismatch, s[2].span, "a quantum if has no else branch");
            }
            const auto cond_refs = refs(s[0]);
            const Context saved = ctx_;
            ctx_.quantum_if = true;
            ctx_.enable.insert(ctx_.enable.end(), cond_refs.begin(), cond_refs.end());
            block(s[1]);
            ctx_ = saved;
            return;
        }
        if (t) {
            condition_type(*t, s[0]);
        }
        block(s[1]);
        if (!s[2].empty()) {
            if (s[2].kind == NodeKind::Block) {
                block(s[2]);
            } else {
                if_statement(s[2]);
            }
        }
    }

    void for_statement(Node &s) {
        ScopeGuard guard(*this);
        Symbol *var = lookup(s.text);
        if (!var) {
            Symbol sym;
            sym.type = type_of(TypeBase::Int);
            declare(s.text, sym, s.span);
        } else if (var->type.base != TypeBase::Int || var->type.payload) {
            report(DiagnosticKind::TypeMismatch, s.span,
                   fmt::format("loop variable '{}' must be an int", s.text));
        }
        for (std::size_t i = 0; i < 3; ++i) {
            if (!s[i].empty()) {
                classical(s[i], "loop bound");
            }
        }
        block(s[3]);
    }

    void assign(Node &s) {
        const Node &target = s[0];
        if (target.kind != NodeKind::Ident && target.kind != NodeKind::Index) {
            report(DiagnosticKind::TypeMismatch, target.span, "cannot assign to this expression");
            return;
        }
        const auto tt = expr(target);
        const auto vt = expr(s[1]);
        if (!tt || !vt) {
            return;
        }
        if (tt->is_linear() || vt->is_linear()) {
            report(DiagnosticKind::CloneViolation, s.span,
                   "quantum values and channel ends cannot be copied by assignment");
            return;
        }
        assignable(*tt, *vt, s[1].span);
    }

    void assignable(const TypeExpr &target, const TypeExpr &value, const Span &span) {
        if (target == value || (is_numeric(target) && is_numeric(value)) ||
            (target.is_quantum() && is_numeric(value))) {
            return;
        }
        report(DiagnosticKind::TypeMismatch, span,
               fmt::format("cannot use {} as {}", to_string(value), to_string(target)));
    }

    void measure(Node &s) {
        if (irreversible(s, "measure")) {
            return;
        }
        quantum_operand(s[0]);
        touch(s[0]);
        if (!s[1].empty()) {
            if (const auto t = expr(s[1]); t && (t->base != TypeBase::Int || t->payload)) {
                report(DiagnosticKind::TypeMismatch, s[1].span,
                       fmt::format("measurement result needs an int variable, '{}' is {}",
                                   s[1].text, to_string(*t)));
            }
        }
    }

    void reset(Node &s) {
        if (irreversible(s, "reset")) {
            return;
        }
        if (s[0].empty()) {
            for (auto &scope : scopes_) {
                for (auto &[name, sym] : scope) {
                    sym.fresh = sym.type.is_quantum();
                }
            }
            for (auto &[name, sym] : c_.globals_) {
                sym.fresh = sym.type.is_quantum();
            }
            return;
        }
        if (quantum_operand(s[0])) {
            for (const auto &r : refs(s[0])) {
                if (Symbol *sym = lookup(r.root); sym && r.whole) {
                    sym->fresh = true;
                }
            }
        }
    }

    void send(Node &s) {
        if (irreversible(s, "send")) {
            return;
        }
        const auto end = expr(s[0]);
        const auto value = expr(s[1]);
        if (!end || !value) {
            return;
        }
        if (end->base != TypeBase::ChannelEnd) {
            report(DiagnosticKind::TypeMismatch, s[0].span, "send needs a channel end");
            return;
        }
        check_payload(*end->payload, *value, s[1].span);
        if (value->is_linear()) {
            consume(s[1]);
        }
    }

    void check_payload(TypeBase payload, const TypeExpr &value, const Span &span) {
        const TypeExpr p = type_of(payload);
        const bool ok = (p.is_quantum() && value.is_quantum()) ||
                        (!p.is_quantum() && is_numeric(p) && is_numeric(value)) ||
                        (p.base == value.base && !value.payload);
        if (!ok) {
            report(DiagnosticKind::TypeMismatch, span,
                   fmt::format("channel carries {} but value is {}", to_string(p), to_string(value)));
        }
    }

    void send_to(Node &s) {
        if (irreversible(s, "send")) {
            return;
        }
        if (std::find(c_.modules_.begin(), c_.modules_.end(), s.text) == c_.modules_.end()) {
            report(DiagnosticKind::UndefinedName, s.span, fmt::format("no module named '{}'", s.text));
        }
        for (auto &v : s.children) {
            const auto t = expr(v);
            if (t && t->base == TypeBase::ChannelEnd) {
                report(DiagnosticKind::TypeMismatch, v.span, "channel ends cannot be sent to a module");
            } else if (t && t->is_quantum()) {
                consume(v);
            }
        }
    }

    void receive_from(Node &s) {
        if (irreversible(s, "receive")) {
            return;
        }
        for (const auto &p : s.children) {
            Symbol sym;
            sym.type = p.type;
            if (p.type.base == TypeBase::Qbit) {
                sym.length = 1;
            }
            declare(p.text, std::move(sym), p.span);
        }
    }

    void fork(Node &s) {
        if (irreversible(s, "fork")) {
            return;
        }
        if (!call(s, false)) {
            return;
        }
        for (auto &arg : s.children) {
            if (const auto t = expr_silent(arg); t && t->is_linear()) {
                consume(arg);
            }
        }
    }

    void channel_decl(Node &s) {
        Symbol ch;
        ch.type = s.type;
        if (s.type.base != TypeBase::Channel) {
            report(DiagnosticKind::TypeMismatch, s.span, "withends needs a channel type");
            return;
        }
        declare(s.text, ch, s.span);
        for (const auto &end : s.children) {
            Symbol e;
            e.type = type_of(TypeBase::ChannelEnd);
            e.type.payload = s.type.payload;
            declare(end.text, e, end.span);
        }
    }

    void alias_for(Node &s) {
        Symbol alias;
        alias.type = type_of(TypeBase::Qureg);
        std::int64_t total = 0;
        bool known = true;
        std::vector<QRef> seen;
        for (const auto &part : s.children) {
            const auto t = expr(part);
            if (!t) {
                return;
            }
            if (!t->is_quantum()) {
                report(DiagnosticKind::TypeMismatch, part.span, "aliases combine registers only");
                return;
            }
            const auto r = refs(part);
            if (refs_overlap(seen, r)) {
                report(DiagnosticKind::OverlapViolation, part.span, "alias parts must be disjoint");
                return;
            }
            seen.insert(seen.end(), r.begin(), r.end());
            const Symbol *sym = lookup(part.text);
            if (sym && sym->length) {
                total += *sym->length;
            } else {
                known = false;
            }
            alias.alias_parts.push_back(part.text);
        }
        if (known) {
            alias.length = total;
        }
        declare(s.text, std::move(alias), s.span);
    }

    void gate_apply(Node &s) {
        const Node &spec = s[0];
        std::string_view name;
        if (spec.kind == NodeKind::GateRef) {
            name = spec.text;
            const auto names = gates::builtin_names();
            bool known = spec.text == "FT";
            for (const auto &n : names) {
                known = known || std::equal(n.begin(), n.end(), spec.text.begin(), spec.text.end(),
                                            [](char a, char b) {
                                                return std::tolower(static_cast<unsigned char>(a)) ==
                                                       std::tolower(static_cast<unsigned char>(b));
                                            });
            }
            try {
                if (!known) {
                    (void)gates::builtin(spec.text);
                }
            } catch (const Error &e) {
                if (e.kind() == ErrorKind::UnknownGate) {
                    report(DiagnosticKind::UndefinedName, spec.span,
                           fmt::format("unknown gate '{}'", spec.text));
                    return;
                }
            }
            for (const auto &p : spec.children) {
                classical(p, "gate parameter");
            }
            if (ctx_.sub && ctx_.sub->kind == SubKind::Qufunct && !is_permutation_gate(name)) {
                report(DiagnosticKind::KindViolation, spec.span,
                       fmt::format("qufunct '{}' may only apply permutation gates, not '{}'",
                                   ctx_.sub->name, spec.text));
                return;
            }
        } else {
            for (const auto &p : spec.children) {
                classical(p, "matrix entry");
            }
        }
        std::vector<std::vector<QRef>> targets;
        for (std::size_t i = 1; i < s.children.size(); ++i) {
            const Node &t = s[i];
            const auto type = expr(t);
            if (!type) {
                return;
            }
            if (!type->is_quantum()) {
                report(DiagnosticKind::TypeMismatch, t.span, "gate targets must be registers");
                return;
            }
            if (type->base == TypeBase::Quconst && !is_diagonal_gate(name)) {
                report(DiagnosticKind::ConstViolation, t.span,
                       "a quconst register cannot be the target of a non-diagonal gate");
                return;
            }
            targets.push_back(refs(t));
        }
        if (!overlap_free(targets, s)) {
            return;
        }
        for (std::size_t i = 1; i < s.children.size(); ++i) {
            touch(s[i]);
        }
    }

    bool overlap_free(const std::vector<std::vector<QRef>> &args, const Node &s) {
        for (std::size_t i = 0; i < args.size(); ++i) {
            for (std::size_t j = i + 1; j < args.size(); ++j) {
                if (refs_overlap(args[i], args[j])) {
                    report(DiagnosticKind::OverlapViolation, s.span,
                           "quantum arguments share qubits");
                    return false;
                }
            }
            if (refs_overlap(args[i], ctx_.enable)) {
                report(DiagnosticKind::OverlapViolation, s.span,
                       "argument overlaps the quantum-if condition register");
                return false;
            }
        }
        return true;
    }

    // Returns false when the call is unusable (diagnostic already issued).
    bool call(Node &s, bool inverse) {
        const auto it = c_.subs_.find(s.text);
        if (it == c_.subs_.end()) {
            report(DiagnosticKind::UndefinedName, s.span, fmt::format("undefined subroutine '{}'", s.text));
            return false;
        }
        const SubSignature &callee = it->second;
        if (callee.name == "dump_q" && irreversible(s, "dump_q")) {
            return false;
        }
        if (inverse && callee.kind == SubKind::Procedure) {
            report(DiagnosticKind::KindViolation, s.span,
                   fmt::format("procedure '{}' cannot be inverted", s.text));
            return false;
        }
        if (ctx_.quantum_if && !callee.cond) {
            report(DiagnosticKind::NonCondInQuantumIf, s.span,
                   fmt::format("'{}' is not conditional and cannot be called inside a quantum if",
                               s.text));
            return false;
        }
        if (ctx_.sub && ctx_.sub->cond && !callee.cond && callee.kind != SubKind::Procedure) {
            report(DiagnosticKind::NonCondInQuantumIf, s.span,
                   fmt::format("conditional '{}' calls non-conditional '{}'", ctx_.sub->name, s.text));
            return false;
        }
        if (ctx_.sub && callee.name != "dump_q" && !kind_allows(ctx_.sub->kind, callee.kind)) {
            report(DiagnosticKind::KindViolation, s.span,
                   fmt::format("{} '{}' cannot call {} '{}'", to_string(ctx_.sub->kind),
                               ctx_.sub->name, to_string(callee.kind), callee.name));
            return false;
        }
        const std::size_t max = callee.params.size();
        const std::size_t min = max - callee.optional_params;
        if (s.children.size() < min || s.children.size() > max) {
            report(DiagnosticKind::ArityMismatch, s.span,
                   fmt::format("'{}' takes {} argument{} but {} given", s.text, max,
                               max == 1 ? "" : "s", s.children.size()));
            return false;
        }
        std::vector<std::vector<QRef>> quantum_args;
        for (std::size_t i = 0; i < s.children.size(); ++i) {
            Node &arg = s[i];
            const TypeExpr &param = callee.params[i].type;
            const auto t = expr(arg);
            if (!t) {
                return false;
            }
            if (param.is_quantum()) {
                if (!t->is_quantum()) {
                    report(DiagnosticKind::TypeMismatch, arg.span,
                           fmt::format("argument {} of '{}' must be a register", i + 1, s.text));
                    return false;
                }
                if (t->base == TypeBase::Quconst && param.base != TypeBase::Quconst) {
                    report(DiagnosticKind::ConstViolation, arg.span,
                           fmt::format("quconst register passed as {} argument of '{}'",
                                       to_string(param), s.text));
                    return false;
                }
                if (param.base == TypeBase::Quvoid && !provably_fresh(arg)) {
                    report(DiagnosticKind::FreshnessUnproven, arg.span,
                           fmt::format("cannot prove argument {} of '{}' is empty; checked at run time",
                                       i + 1, s.text),
                           Severity::Warning);
                }
                quantum_args.push_back(refs(arg));
            } else if (t->is_quantum()) {
                report(DiagnosticKind::QuantumRead, arg.span,
                       "a register cannot be read as a classical value");
                return false;
            } else if (param.base == TypeBase::ChannelEnd || t->base == TypeBase::ChannelEnd) {
                if (param.base != t->base || param.payload != t->payload) {
                    report(DiagnosticKind::TypeMismatch, arg.span,
                           fmt::format("expected {} but found {}", to_string(param), to_string(*t)));
                    return false;
                }
            } else if (!(param == *t || (is_numeric(param) && is_numeric(*t)))) {
                report(DiagnosticKind::TypeMismatch, arg.span,
                       fmt::format("expected {} but found {}", to_string(param), to_string(*t)));
                return false;
            }
        }
        if (!overlap_free(quantum_args, s)) {
            return false;
        }
        for (std::size_t i = 0; i < s.children.size(); ++i) {
            if (callee.params[i].type.is_quantum() && callee.params[i].type.base != TypeBase::Quconst) {
                touch(s[i]);
            }
        }
        return true;
    }

    // ---- expressions ---------------------------------------------------

    void condition(const Node &e) {
        if (const auto t = expr(e)) {
            condition_type(*t, e);
        }
    }

    void condition_type(const TypeExpr &t, const Node &e) {
        if (t.is_quantum()) {
            report(DiagnosticKind::QuantumRead, e.span,
                   "a register cannot be read as a classical condition");
        } else if (!is_numeric(t)) {
            report(DiagnosticKind::TypeMismatch, e.span,
                   fmt::format("condition must be bool or int, found {}", to_string(t)));
        }
    }

    void classical(const Node &e, std::string_view what) {
        const auto t = expr(e);
        if (t && t->is_quantum()) {
            report(DiagnosticKind::QuantumRead, e.span,
                   fmt::format("a register cannot be used as {}", what));
        }
    }

    bool quantum_operand(const Node &e) {
        const auto t = expr(e);
        if (!t) {
            return false;
        }
        if (!t->is_quantum()) {
            report(DiagnosticKind::TypeMismatch, e.span, "expected a register");
            return false;
        }
        return true;
    }

    // Type without diagnostics; used after a node was already checked.
    std::optional<TypeExpr> expr_silent(const Node &e) {
        const std::size_t mark = diags.size();
        auto t = expr(e);
        diags.resize(mark);
        return t;
    }

    std::optional<TypeExpr> expr(const Node &e) {
        switch (e.kind) {
        case NodeKind::IntLit: return type_of(TypeBase::Int);
        case NodeKind::RealLit: return type_of(TypeBase::Real);
        case NodeKind::StringLit: return type_of(TypeBase::String);
        case NodeKind::BoolLit: return type_of(TypeBase::Bool);
        case NodeKind::Ident: return identifier(e);
        case NodeKind::Index:
        case NodeKind::Slice: {
            const auto base = expr(e[0]);
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                classical(e[i], "an index");
            }
            if (!base) {
                return std::nullopt;
            }
            if (!base->is_quantum()) {
                report(DiagnosticKind::TypeMismatch, e.span,
                       fmt::format("cannot index a value of type {}", to_string(*base)));
                return std::nullopt;
            }
            return type_of(base->base == TypeBase::Quconst ? TypeBase::Quconst : TypeBase::Qureg);
        }
        case NodeKind::Length: {
            const auto t = expr(e[0]);
            if (t && !t->is_quantum()) {
                report(DiagnosticKind::TypeMismatch, e.span, "# needs a register");
                return std::nullopt;
            }
            return t ? std::optional(type_of(TypeBase::Int)) : std::nullopt;
        }
        case NodeKind::Concat: {
            const auto a = expr(e[0]);
            if (!a) {
                return std::nullopt;
            }
            const auto b = expr(e[1]);
            if (!b) {
                return std::nullopt;
            }
            if (!a->is_quantum() || !b->is_quantum()) {
                report(DiagnosticKind::TypeMismatch, e.span, "& joins registers only");
                return std::nullopt;
            }
            if (refs_overlap(refs(e[0]), refs(e[1]))) {
                report(DiagnosticKind::OverlapViolation, e.span, "concatenated registers share qubits");
                return std::nullopt;
            }
            const bool is_const = a->base == TypeBase::Quconst || b->base == TypeBase::Quconst;
            return type_of(is_const ? TypeBase::Quconst : TypeBase::Qureg);
        }
        case NodeKind::Unary: {
            const auto t = expr(e[0]);
            if (!t) {
                return std::nullopt;
            }
            if (t->is_quantum()) {
                report(DiagnosticKind::QuantumRead, e.span, "a register cannot be read as a classical value");
                return std::nullopt;
            }
            if (!is_numeric(*t)) {
                report(DiagnosticKind::TypeMismatch, e.span,
                       fmt::format("operator {} needs a number", e.text));
                return std::nullopt;
            }
            return e.text == "not" ? type_of(TypeBase::Bool) : *t;
        }
        case NodeKind::Binary: return binary(e);
        case NodeKind::CallExpr: {
            Node copy = e;
            if (!call(copy, false)) {
                return std::nullopt;
            }
            const TypeExpr result = c_.subs_.at(e.text).result;
            if (result.base == TypeBase::Void && !result.payload) {
                report(DiagnosticKind::TypeMismatch, e.span,
                       fmt::format("'{}' does not return a value", e.text));
                return std::nullopt;
            }
            return result;
        }
        case NodeKind::MeasureExpr: {
            if (irreversible(e, "measure")) {
                return std::nullopt;
            }
            std::size_t first = 0;
            if (e.children.size() > 1 && e[0].kind == NodeKind::Ident && e[0].text == "BellBasis") {
                first = 1;
                if (e.children.size() != 3) {
                    report(DiagnosticKind::ArityMismatch, e.span,
                           "a Bell-basis measurement takes exactly two qubits");
                    return std::nullopt;
                }
            }
            std::vector<std::vector<QRef>> operands;
            for (std::size_t i = first; i < e.children.size(); ++i) {
                if (!quantum_operand(e[i])) {
                    return std::nullopt;
                }
                operands.push_back(refs(e[i]));
            }
            if (!overlap_free(operands, e)) {
                return std::nullopt;
            }
            for (std::size_t i = first; i < e.children.size(); ++i) {
                touch(e[i]);
            }
            return type_of(TypeBase::Int);
        }
        case NodeKind::RecvExpr: {
            if (irreversible(e, "recv")) {
                return std::nullopt;
            }
            const auto t = expr(e[0]);
            if (!t) {
                return std::nullopt;
            }
            if (t->base != TypeBase::ChannelEnd) {
                report(DiagnosticKind::TypeMismatch, e[0].span, "recv needs a channel end");
                return std::nullopt;
            }
            return type_of(*t->payload);
        }
        case NodeKind::NewChannel: return e.type;
        default:
            report(DiagnosticKind::TypeMismatch, e.span,
                   fmt::format("unexpected {} in expression", to_string(e.kind)));
            return std::nullopt;
        }
    }

    std::optional<TypeExpr> identifier(const Node &e) {
        Symbol *sym = lookup(e.text);
        if (!sym) {
            if (e.text == "pi") {
                return type_of(TypeBase::Real);
            }
            report(DiagnosticKind::UndefinedName, e.span, fmt::format("undefined name '{}'", e.text));
            return std::nullopt;
        }
        bool moved = sym->consumed;
        for (const auto &part : sym->alias_parts) {
            const Symbol *p = lookup(part);
            moved = moved || (p && p->consumed);
        }
        if (moved) {
            report(DiagnosticKind::UseAfterMove, e.span,
                   fmt::format("'{}' was moved to another process and can no longer be used", e.text));
            return std::nullopt;
        }
        return sym->type;
    }

    std::optional<TypeExpr> binary(const Node &e) {
        const auto a = expr(e[0]);
        if (!a) {
            return std::nullopt;
        }
        const auto b = expr(e[1]);
        if (!b) {
            return std::nullopt;
        }
        if (a->is_quantum() || b->is_quantum()) {
            report(DiagnosticKind::QuantumRead, e.span,
                   "a register cannot be read as a classical value; measure it first");
            return std::nullopt;
        }
        const std::string &op = e.text;
        if (op == "and" || op == "or" || op == "xor" || op == "==" || op == "!=" || op == "<" ||
            op == "<=" || op == ">" || op == ">=") {
            const bool comparable = (is_numeric(*a) && is_numeric(*b)) || *a == *b;
            if (!comparable) {
                report(DiagnosticKind::TypeMismatch, e.span,
                       fmt::format("cannot compare {} with {}", to_string(*a), to_string(*b)));
                return std::nullopt;
            }
            return type_of(TypeBase::Bool);
        }
        if (op == "+" && a->base == TypeBase::String && b->base == TypeBase::String) {
            return *a;
        }
        if (!is_numeric(*a) || !is_numeric(*b)) {
            report(DiagnosticKind::TypeMismatch, e.span,
                   fmt::format("operator {} needs numbers, found {} and {}", op, to_string(*a),
                               to_string(*b)));
            return std::nullopt;
        }
        if (a->base == TypeBase::Real || b->base == TypeBase::Real) {
            return type_of(TypeBase::Real);
        }
        return type_of(TypeBase::Int);
    }

    // ---- register analysis ---------------------------------------------

    std::optional<std::int64_t> const_int(const Node &e) {
        switch (e.kind) {
        case NodeKind::IntLit:
            if (e.text.size() > 15) {
                return std::nullopt;
            }
            return std::stoll(e.text);
        case NodeKind::Unary:
            if (e.text == "-") {
                if (auto v = const_int(e[0])) {
                    return -*v;
                }
            }
            return std::nullopt;
        case NodeKind::Binary: {
            const auto a = const_int(e[0]);
            const auto b = const_int(e[1]);
            if (!a || !b) {
                return std::nullopt;
            }
            if (e.text == "+") return *a + *b;
            if (e.text == "-") return *a - *b;
            if (e.text == "*") return *a * *b;
            return std::nullopt;
        }
        case NodeKind::Length: {
            if (e[0].kind == NodeKind::Ident) {
                if (const Symbol *s = lookup(e[0].text); s && s->length) {
                    return s->length;
                }
            }
            return std::nullopt;
        }
        default:
            return std::nullopt;
        }
    }

    std::vector<QRef> refs(const Node &e) {
        switch (e.kind) {
        case NodeKind::Ident: {
            const Symbol *sym = lookup(e.text);
            if (!sym) {
                return {};
            }
            if (!sym->alias_parts.empty()) {
                std::vector<QRef> out;
                for (const auto &part : sym->alias_parts) {
                    auto r = refs(frontend::make_node(NodeKind::Ident, e.span, part));
                    out.insert(out.end(), r.begin(), r.end());
                }
                return out;
            }
            QRef r{e.text, true, sym->length.has_value(), {}};
            if (sym->length) {
                for (std::int64_t i = 0; i < *sym->length; ++i) {
                    r.idx.push_back(i);
                }
            }
            return {r};
        }
        case NodeKind::Index:
        case NodeKind::Slice: {
            auto base = refs(e[0]);
            const auto offset = const_int(e[1]);
            const auto length = e.kind == NodeKind::Index ? std::optional<std::int64_t>(1)
                                                          : const_int(e[2]);
            if (base.size() == 1 && offset && length && *offset >= 0 && *length >= 0 &&
                (!base[0].known || static_cast<std::size_t>(*offset + *length) <= base[0].idx.size())) {
                QRef r{base[0].root, false, true, {}};
                for (std::int64_t i = *offset; i < *offset + *length; ++i) {
                    r.idx.push_back(base[0].known ? base[0].idx[static_cast<std::size_t>(i)] : i);
                }
                // A slice of an unknown-length whole register still has known positions.
                if (!base[0].known && !base[0].whole) {
                    r.known = false;
                    r.idx.clear();
                }
                return {r};
            }
            for (auto &r : base) {
                r.whole = false;
                r.known = false;
                r.idx.clear();
            }
            return base;
        }
        case NodeKind::Concat: {
            auto a = refs(e[0]);
            auto b = refs(e[1]);
            a.insert(a.end(), b.begin(), b.end());
            return a;
        }
        default:
            return {};
        }
    }

    void touch(const Node &e) {
        for (const auto &r : refs(e)) {
            if (Symbol *sym = lookup(r.root)) {
                sym->fresh = false;
            }
        }
    }

    bool provably_fresh(const Node &e) {
        const auto rs = refs(e);
        return !rs.empty() && std::all_of(rs.begin(), rs.end(), [&](const QRef &r) {
            const Symbol *sym = lookup(r.root);
            return sym && sym->fresh;
        });
    }

    void consume(const Node &e) {
        const Node *root = &e;
        while (root->kind == NodeKind::Index || root->kind == NodeKind::Slice) {
            root = &(*root)[0];
        }
        if (root->kind == NodeKind::Concat) {
            consume((*root)[0]);
            consume((*root)[1]);
            return;
        }
        if (root->kind != NodeKind::Ident) {
            return;
        }
        if (Symbol *sym = lookup(root->text)) {
            sym->consumed = true;
        }
    }
};

Checker::Checker() : subs_(stdlib()) {}

std::vector<Diagnostic> Checker::check(Node &program) {
    Walker w(*this);
    w.program(program);
    return std::move(w.diags);
}

std::vector<Diagnostic> reversibility_audit(const Node &sub_decl) {
    Node prog = frontend::make_node(NodeKind::Program, sub_decl.span, {}, {sub_decl});
    Checker checker;
    auto all = checker.check(prog);
    std::vector<Diagnostic> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [](const Diagnostic &d) {
        return d.kind == DiagnosticKind::IrreversibleStatement;
    });
    return out;
}

} // namespace qrl::typecheck
